pub mod arith;
pub mod checks;
pub mod corpus;
pub mod dot;
pub mod group;
pub mod lattice;
pub mod sigma;
pub mod subgroup;
pub mod subnormality;
pub mod verifier;
