//! Elliptic-curve point counting over prime fields by Schoof's algorithm, and
//! deterministic factoring of split quadratics by running the same algorithm
//! over F_q[z]/(h).

pub mod bigmod;
pub mod poly;
pub mod qring;
pub mod ring;
pub mod curve;
pub mod divpoly;
pub mod oracle;
pub mod schoof;
pub mod factorizer;
pub mod cli;
