//! Machine programs that compute fundamental sequences of canonical notations.
//!
//! Notation codes are handled through their numerals (see
//! [`super::notation::NotationCode::numeral`]): `One ↦ 0`, `2^t ↦ 4t+1`,
//! `3^e ↦ 4e+2`. Three generators do the work:
//!
//! * `ADD_GEN(a, e, n) = add(a, φ_e(n))`: sums whose right operand is a limit;
//! * `MUL_GEN(u, n) = u ⊕ (u ⊕ … u)` with `n` copies (`One` for `n = 0`);
//! * `EXP_LIM(e, n) = exp(φ_e(n))`: `ω` to a limit exponent.
//!
//! `add` and `exp` are the notation-level operations mirrored exactly by
//! [`super::notation`]. `ADD_GEN` and `EXP_LIM` refer to their own indices and
//! are obtained as recursion-theorem fixed points.

use std::sync::OnceLock;

use crate::machine::fixpoint::self_referential;
use crate::machine::{encode_program, Asm, ProgramIndex};

/// Register that is never written, so it always holds zero.
const ZERO: u64 = 30;

#[derive(Debug)]
pub struct NotationLibrary {
    /// `(g, a, b) ↦ add(a, b)` where `g` is `ADD_GEN`'s index.
    pub add_helper: ProgramIndex,
    pub add_gen: ProgramIndex,
    pub mul_gen: ProgramIndex,
    /// `(g, x) ↦ exp(x)` where `g` is `EXP_LIM`'s index.
    pub exp_helper: ProgramIndex,
    pub exp_lim: ProgramIndex,
}

fn add_helper() -> ProgramIndex {
    // r0 = g, r1 = a, r2 = b; r3 counts peeled successor layers
    let p = Asm::new()
        .load(6, 1u32)
        .zero(3)
        .label("peel")
        .jump_if_eq(2, ZERO, "base_one")
        .halve(2, 4)
        .halve(2, 5)
        .jump_if_eq(4, 6, "pow2")
        // b = 3^e: result 3^{smn(smn(g, [a]), [e])}
        .specialize(10, 0, 1)
        .specialize(7, 10, 2)
        .double(7)
        .double(7)
        .succ(7)
        .succ(7)
        .jump("wrap")
        .label("pow2")
        .succ(3)
        .jump("peel")
        .label("base_one")
        .copy(1, 7)
        .label("wrap")
        .zero(9)
        .label("wrap_loop")
        .jump_if_eq(9, 3, "done")
        .double(7)
        .double(7)
        .succ(7)
        .succ(9)
        .jump("wrap_loop")
        .label("done")
        .copy(7, 0)
        .finish(3);
    encode_program(&p)
}

fn add_body(add_helper: &ProgramIndex) -> ProgramIndex {
    // r0 = self, r1 = a, r2 = e, r3 = n
    let p = Asm::new()
        .apply(4, 2, 3, 1)
        .copy(4, 2)
        .load(5, add_helper.0.clone())
        .apply(0, 5, 0, 3)
        .finish(4);
    encode_program(&p)
}

fn mul_gen(add_helper: &ProgramIndex, add_gen: &ProgramIndex) -> ProgramIndex {
    // r0 = u, r1 = n; r10 accumulates, r2 counts copies
    let p = Asm::new()
        .jump_if_eq(1, ZERO, "none")
        .copy(0, 10)
        .load(2, 1u32)
        .label("loop")
        .jump_if_eq(2, 1, "done")
        .load(20, add_gen.0.clone())
        .copy(0, 21)
        .copy(10, 22)
        .load(23, add_helper.0.clone())
        .apply(10, 23, 20, 3)
        .succ(2)
        .jump("loop")
        .label("none")
        .zero(0)
        .halt()
        .label("done")
        .copy(10, 0)
        .finish(2);
    encode_program(&p)
}

fn exp_helper(mul_gen: &ProgramIndex) -> ProgramIndex {
    // r0 = g, r1 = x; r3 counts peeled successor layers
    let p = Asm::new()
        .load(6, 1u32)
        .zero(3)
        .label("peel")
        .jump_if_eq(1, ZERO, "base_one")
        .halve(1, 4)
        .halve(1, 5)
        .jump_if_eq(4, 6, "pow2")
        // x = 3^e: exp(x) = 3^{smn(g, [e])}
        .specialize(7, 0, 1)
        .double(7)
        .double(7)
        .succ(7)
        .succ(7)
        .jump("wrap")
        .label("pow2")
        .succ(3)
        .jump("peel")
        .label("base_one")
        .load(7, 1u32)
        .label("wrap")
        .zero(9)
        .load(11, mul_gen.0.clone())
        .label("wrap_loop")
        .jump_if_eq(9, 3, "done")
        .specialize(7, 11, 7)
        .double(7)
        .double(7)
        .succ(7)
        .succ(7)
        .succ(9)
        .jump("wrap_loop")
        .label("done")
        .copy(7, 0)
        .finish(2);
    encode_program(&p)
}

fn exp_lim_body(exp_helper: &ProgramIndex) -> ProgramIndex {
    // r0 = self, r1 = e, r2 = n
    let p = Asm::new()
        .apply(3, 1, 2, 1)
        .copy(3, 1)
        .load(5, exp_helper.0.clone())
        .apply(0, 5, 0, 2)
        .finish(3);
    encode_program(&p)
}

impl NotationLibrary {
    fn build() -> Self {
        let add_helper = add_helper();
        let add_gen = self_referential(&add_body(&add_helper));
        let mul_gen = mul_gen(&add_helper, &add_gen);
        let exp_helper = exp_helper(&mul_gen);
        let exp_lim = self_referential(&exp_lim_body(&exp_helper));
        NotationLibrary {
            add_helper,
            add_gen,
            mul_gen,
            exp_helper,
            exp_lim,
        }
    }
}

pub fn library() -> &'static NotationLibrary {
    static LIB: OnceLock<NotationLibrary> = OnceLock::new();
    LIB.get_or_init(NotationLibrary::build)
}
