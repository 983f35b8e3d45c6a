//! Shared fixtures for the benchmarks.

use num_bigint::BigUint;
use workbench_core::machine::{encode_program, Asm};
use workbench_core::ProgramIndex;

/// `x ↦ 2x` by a unary loop: about `3x` steps.
pub fn doubling_loop() -> ProgramIndex {
    let program = Asm::new()
        .zero(1)
        .zero(2)
        .label("loop")
        .jump_if_eq(1, 0, "done")
        .succ(1)
        .succ(2)
        .succ(2)
        .jump("loop")
        .label("done")
        .copy(2, 0)
        .finish(1);
    encode_program(&program)
}

pub fn n(v: u64) -> BigUint {
    BigUint::from(v)
}
