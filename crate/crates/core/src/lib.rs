pub mod analysis;
pub mod codes;
pub mod decoder;
pub mod galois;
pub mod kv;
pub mod linalg;
pub mod ops;
pub mod rng;
pub mod sim;
