//! Exact diagram calculus for the symplectic blob algebra `b^x_n`.
//!
//! The crate implements, over exact arithmetic (rational functions in an
//! auxiliary variable `x` with `q = x^D`, rational points, and cyclotomic
//! specializations):
//!
//! * the decorated-diagram basis of `b^x_n`, straightening and multiplication
//!   ([`diagrams`]);
//! * cell (standard) modules with half-diagram bases and the algebra action
//!   ([`cellmod`]);
//! * lattice-path bases of the `2^n`-dimensional module `W^n(b)` and the
//!   tile-addition operators ([`paths`]);
//! * the contravariant form, Gram matrices in diagram and path bases, and the
//!   closed determinant formulas ([`gram`]);
//! * the Hecke-algebra surjection, Murphy elements and the central element
//!   `Z_n` with its eigenvalues ([`central`]);
//! * the complete block classification with decomposition graphs and weight
//!   plots ([`blocks`]);
//! * a brute-force Hom-quiver oracle used to validate the classifier
//!   ([`oracle`]).
//!
//! The primary interface is the `examples/` directory (one runnable example
//! per capability) together with a thin CLI binary (`symblob`).

pub mod exact;
pub mod params;
pub mod diagrams;
pub mod cellmod;
pub mod paths;
pub mod gram;
pub mod central;
pub mod blocks;
pub mod oracle;
pub mod cli;
