pub mod grid;
pub mod rational;
pub mod strips;
pub mod matching;
pub mod lp;
pub mod approx;
pub mod generate;
pub mod exact;
pub mod geometry;
pub mod io;
pub mod solve;
pub mod svg;
pub mod bench;
