pub mod chain;
pub mod cosets;
pub mod exact;
pub mod linalg;
pub mod perm;
pub mod poly;
pub mod shuffle;
pub mod sim;
pub mod weights;
