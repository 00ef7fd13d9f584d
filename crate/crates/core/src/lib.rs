//! Decide, construct and verify U-embeddings: isometric embeddings of
//! polyhedral normed spaces into spaces of continuous functions under which
//! every functional has exactly one norm-preserving extension.
//!
//! The exact pipeline runs on [`Rat`](scalar::Rat):
//!
//! ```
//! use uembed::{corpus, embed, usuit};
//!
//! let space = corpus::exact("hexagon").unwrap();
//! let e = usuit::build_u_suitable(&space, None).unwrap();
//! let u = embed::FiniteEmbedding::build_ue(&space, &e).unwrap();
//! let cert = embed::verify_u_embedding(&u, 50, 0).unwrap();
//! assert!(cert.certified_u);
//! ```

pub mod ckmap;
pub mod corpus;
pub mod embed;
pub mod error;
#[cfg(any(test, feature = "oracle"))]
pub mod oracle;
pub mod ratgeom;
pub mod scalar;
pub mod space;
pub mod usuit;

pub use error::{Error, Result};
pub use ratgeom::{RatVector, Vector};
pub use scalar::{Rat, Scalar};
