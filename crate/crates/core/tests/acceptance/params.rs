use cantor_arith::parameters::{alpha1_of_m, default_radius, e_bounds, ln_bounds, solve_a0};
use cantor_arith::ratio::{frac, int};

use crate::common::Criterion;

pub fn c5_constants() -> Criterion {
    let mut c = Criterion::new(5, "alpha1(1) and a0 enclosures");
    let r = default_radius();
    let a1 = alpha1_of_m(1, 99, &r).unwrap();
    c.check(
        "alpha1(1) = 1/3",
        a1.contains(&frac(1, 3)) && a1.radius() <= r,
        format!("[{}, {}]", a1.lo, a1.hi),
    );

    let a0 = solve_a0();
    // a² ln a is increasing for a > 1: bracket 1/(2e) by certified bounds
    let bits = 80;
    let (e_lo, e_hi) = e_bounds(bits);
    let target_lo = int(1) / (int(2) * e_hi);
    let target_hi = int(1) / (int(2) * e_lo);
    let f_lo_upper = &a0.lo * &a0.lo * ln_bounds(&a0.lo, bits).1;
    let f_hi_lower = &a0.hi * &a0.hi * ln_bounds(&a0.hi, bits).0;
    c.check(
        "a0 brackets the root",
        f_lo_upper <= target_hi && f_hi_lower >= target_lo && f_lo_upper < f_hi_lower,
        "",
    );
    c.check("a0 radius", a0.radius() <= r, a0.to_decimal(15));
    c.check(
        "a0 in [1.149, 1.150]",
        a0.lo >= frac(1149, 1000) && a0.hi <= frac(115, 100),
        a0.to_decimal(15),
    );
    c
}
