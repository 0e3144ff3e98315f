//! Exact evaluation, classification and polynomial-time solvers for
//! bipartite Holant(f | =3) problems over the rationals, with a planar
//! matchgate pipeline for the signature [0,1,1,0].

pub mod arith;
pub mod dichotomy;
pub mod grid;
pub mod interp;
pub mod io;
pub mod linalg;
pub mod planar;
pub mod sig;
pub mod tractable;
