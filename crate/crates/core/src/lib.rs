//! Higher-order pushdown systems of level 1 and 2, their nested pushdown trees,
//! structural analyses of runs, type equivalences and first-order model checking.

pub mod analysis;
pub mod fomc;
pub mod magnitude;
pub mod npt;
pub mod stack;
pub mod system;
pub mod wordtypes;
