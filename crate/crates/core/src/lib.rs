pub mod contfrac;
pub mod exact;
pub mod geometry;
pub mod identities;
pub mod numerics;
pub mod sequences;

pub use exact::{BoundaryPoint, QuadNum};
pub use identities::{
    catalog, cross_validate, instantiate, instantiate_group, verify, Identity, IdentityError, VerificationReport,
    VerifyOptions,
};
pub use numerics::{rogers, BigReal};
