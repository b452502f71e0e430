pub mod numerics;
pub mod model;
pub mod bound_state;
pub mod fock;
pub mod verify;
pub mod cli;
