pub mod distance;
pub mod geodesic;
pub mod member;
pub mod sweep;
pub mod verify;
