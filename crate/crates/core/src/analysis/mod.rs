//! Singularities of assembled solutions: where they occur, their local
//! vanishing structure, directional limits and far-field decay.

pub mod aberth;
pub mod limits;
pub mod realroots;
pub mod resultant;
pub mod singular;

pub use limits::{
    decay_exponent, log_radii, ray_limit, ray_limit_local, DecayFit, LocalExpansion, RayLimit,
    DEFAULT_RAY_RADII,
};
pub use realroots::RealRoot;
pub use singular::{
    singular_points_at, singular_times, vanishing_order, vanishing_order_required, SingularPoint,
    SingularTimes,
};
