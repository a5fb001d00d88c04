/// Root of a monotone `f` on `[lo, hi]`, where `f(lo)` and `f(hi)` have
/// opposite signs. Newton steps from `x0`, falling back to bisection whenever
/// a step would leave the current bracket.
pub(crate) fn bracketed_newton<F, D>(f: F, df: D, mut lo: f64, mut hi: f64, x0: f64) -> f64
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let lo_sign = f(lo).signum();
    let mut x = if x0 > lo && x0 < hi {
        x0
    } else {
        0.5 * (lo + hi)
    };
    for _ in 0..400 {
        let fx = f(x);
        if fx == 0.0 {
            return x;
        }
        if fx.signum() == lo_sign {
            lo = x;
        } else {
            hi = x;
        }
        let slope = df(x);
        let mut next = x - fx / slope;
        if !next.is_finite() || next <= lo || next >= hi {
            next = 0.5 * (lo + hi);
        }
        let scale = x.abs().max(1e-300);
        if (next - x).abs() <= 4.0 * f64::EPSILON * scale || hi - lo <= 4.0 * f64::EPSILON * scale {
            return next;
        }
        x = next;
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_cube_root() {
        let r = bracketed_newton(|x| x * x * x - 2.0, |x| 3.0 * x * x, 0.0, 2.0, 1.0);
        assert!((r - 2f64.cbrt()).abs() < 1e-15);
    }

    #[test]
    fn survives_flat_start() {
        // Zero derivative at the start forces the bisection fallback.
        let r = bracketed_newton(|x| x * x * x, |x| 3.0 * x * x, -1.0, 3.0, 0.0 + 1e-30);
        assert!(r.abs() < 1e-5);
    }
}
