//! Level-dependent trap sets built from pairs of points.
//!
//! A pair `(P₁, P₂)` is in `A` when `(P₁, P₂, −P₁−P₂)` is a 3-to-2 trap, and
//! in `B_j` when `(P₁, P₂, σ_j P₁, σ_j P₂)` is a 4-to-3 trap, where `σ_j` is
//! the `q^{2^{j−1}}`-power Frobenius. At level `i` (with lowest level `c`):
//!
//! * `T₄(i) = A ∪ B_c ∪ … ∪ B_i`;
//! * `T₃(i) = B_c ∪ … ∪ B_i`, together with `A` when `i > c`.
//!
//! A divisor is in the leveled set when every pair of its points is.

use std::sync::Arc;

use crate::algebra::Field;
use crate::curve::Pt;
use crate::elim32::trap3_base;
use crate::elim43::trap4_base;
use crate::model::Model;

/// `(P₁, P₂, −P₁−P₂)` is a (strict) 3-to-2 trap.
pub fn pair_in_a(m: &Model, l: &Arc<Field>, p1: &Pt, p2: &Pt) -> bool {
    let c = &m.curve;
    let third = c.neg(l, &c.add(l, p1, p2));
    if p1.inf || p2.inf || third.inf {
        return true;
    }
    trap3_base(m, l, &[*p1, *p2, third], true).is_trap()
}

/// `(P₁, P₂, σ_j P₁, σ_j P₂)` is a (strict) 4-to-3 trap.
pub fn pair_in_b(m: &Model, l: &Field, j: usize, p1: &Pt, p2: &Pt) -> bool {
    let c = &m.curve;
    let e = 1i64 << (j.max(1) - 1);
    let pts = [*p1, *p2, c.frob(l, p1, e), c.frob(l, p2, e)];
    trap4_base(m, l, &pts, true).is_trap()
}

fn pair_in_bs(m: &Model, l: &Field, level: usize, c: usize, p1: &Pt, p2: &Pt) -> bool {
    (c.max(1)..=level).any(|j| pair_in_b(m, l, j, p1, p2))
}

fn all_pairs(pts: &[Pt], mut test: impl FnMut(&Pt, &Pt) -> bool) -> bool {
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            if !test(&pts[i], &pts[j]) {
                return false;
            }
        }
    }
    true
}

/// Every pair of `pts` lies in `T₃(level)`.
pub fn all_pairs_in_t3(m: &Model, l: &Arc<Field>, pts: &[Pt], level: usize, c: usize) -> bool {
    all_pairs(pts, |a, b| pair_in_bs(m, l, level, c, a, b) || (level > c && pair_in_a(m, l, a, b)))
}

/// Every pair of `pts` lies in `T₄(level)`.
pub fn all_pairs_in_t4(m: &Model, l: &Arc<Field>, pts: &[Pt], level: usize, c: usize) -> bool {
    all_pairs(pts, |a, b| pair_in_a(m, l, a, b) || pair_in_bs(m, l, level, c, a, b))
}
