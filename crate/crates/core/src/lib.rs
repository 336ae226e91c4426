pub mod analysis;
pub mod canonical;
pub mod criteria;
pub mod curvemodel;
pub mod exactpoly;
pub mod hilbert;
pub mod numtheory;
pub mod pointcount;
pub mod quotient;
pub mod regression;
pub mod selmerdims;
pub(crate) mod serde_util;
