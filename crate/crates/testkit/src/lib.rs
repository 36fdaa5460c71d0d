//! Reference implementations for differential testing. Nothing here shares
//! code with `hahn-core`: series are dense coefficient arrays over integer
//! exponents, and set operations are plain loops.

pub mod exprgen;
pub mod oracle;
pub mod sets;
