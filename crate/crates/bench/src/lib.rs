//! Fixed inputs shared by the benchmarks.

use flagorbit_core::{Context, OrbitProblem};

/// The `(B3, C3, A2(l)xA1(s))` cell with `w·ρ = (-5/2,11/2,3/2,1/2)`,
/// `v·ρ = (1/2,9/2,7/2,5/2)` and `x = 1`.
pub fn finite_cell(ctx: &Context) -> OrbitProblem {
    let wg = &ctx.weyl;
    let p1 = ctx.parse_parabolic("B3").expect("label");
    let p2 = ctx.parse_parabolic("C3").expect("label");
    let p3 = ctx.parse_parabolic("A2(l)xA1(s)").expect("label");
    let w = wg.element_from_rho_image(&"-5/2,11/2,3/2,1/2".parse().expect("vector")).expect("ρ-image");
    let v = wg.element_from_rho_image(&"1/2,9/2,7/2,5/2".parse().expect("vector")).expect("ρ-image");
    OrbitProblem::new(ctx, &p1, &p2, &p3, w, v, wg.identity()).expect("cell")
}

/// The longest cell of `(B3, B3, A1(l)xA2(s))`.
pub fn infinite_cell(ctx: &Context) -> OrbitProblem {
    let p1 = ctx.parse_parabolic("B3").expect("label");
    let p3 = ctx.parse_parabolic("A1(l)xA2(s)").expect("label");
    OrbitProblem::longest_cell(ctx, &p1, &p1, &p3).expect("cell")
}
