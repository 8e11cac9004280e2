use num_traits::Float;

use crate::error::{Result, RpmError};

fn c<F: Float>(x: f64) -> F {
    F::from(x).expect("representable constant")
}

/// Adaptive Dormand–Prince 5(4) integration of the scalar ODE `y' = f(x, y)`
/// from `x0` to `x1` (either direction). Returns `y(x1)`.
pub fn integrate<F: Float, G: FnMut(F, F) -> F>(
    mut f: G,
    x0: F,
    x1: F,
    y0: F,
    rtol: F,
    atol: F,
    max_steps: usize,
) -> Result<F> {
    let (a21, a31, a32) = (c::<F>(1.0 / 5.0), c::<F>(3.0 / 40.0), c::<F>(9.0 / 40.0));
    let (a41, a42, a43) = (c::<F>(44.0 / 45.0), c::<F>(-56.0 / 15.0), c::<F>(32.0 / 9.0));
    let (a51, a52, a53, a54) =
        (c::<F>(19372.0 / 6561.0), c::<F>(-25360.0 / 2187.0), c::<F>(64448.0 / 6561.0), c::<F>(-212.0 / 729.0));
    let (a61, a62, a63, a64, a65) = (
        c::<F>(9017.0 / 3168.0),
        c::<F>(-355.0 / 33.0),
        c::<F>(46732.0 / 5247.0),
        c::<F>(49.0 / 176.0),
        c::<F>(-5103.0 / 18656.0),
    );
    let (b1, b3, b4, b5, b6) = (
        c::<F>(35.0 / 384.0),
        c::<F>(500.0 / 1113.0),
        c::<F>(125.0 / 192.0),
        c::<F>(-2187.0 / 6784.0),
        c::<F>(11.0 / 84.0),
    );
    // 5th-order minus embedded 4th-order weights
    let (e1, e3, e4, e5, e6, e7) = (
        c::<F>(71.0 / 57600.0),
        c::<F>(-71.0 / 16695.0),
        c::<F>(71.0 / 1920.0),
        c::<F>(-17253.0 / 339200.0),
        c::<F>(22.0 / 525.0),
        c::<F>(-1.0 / 40.0),
    );
    let (c2, c3, c4, c5) = (c::<F>(0.2), c::<F>(0.3), c::<F>(0.8), c::<F>(8.0 / 9.0));

    let span = x1 - x0;
    if span == F::zero() {
        return Ok(y0);
    }
    let dir = span.signum();
    let mut h = span / c(100.0);
    let mut x = x0;
    let mut y = y0;
    let mut k1 = f(x, y);
    for _ in 0..max_steps {
        if (x1 - x) * dir <= F::zero() {
            return Ok(y);
        }
        if (x + h - x1) * dir > F::zero() {
            h = x1 - x;
        }
        let k2 = f(x + c2 * h, y + h * a21 * k1);
        let k3 = f(x + c3 * h, y + h * (a31 * k1 + a32 * k2));
        let k4 = f(x + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
        let k5 = f(x + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        let k6 = f(x + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        let y_new = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        let k7 = f(x + h, y_new);
        let err = (h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7)).abs();
        let scale = atol + rtol * y.abs().max(y_new.abs());
        let ratio = err / scale;
        if !ratio.is_finite() {
            return Err(RpmError::Integration(format!("non-finite step at x = {:?}", x.to_f64())));
        }
        if ratio <= F::one() {
            x = x + h;
            y = y_new;
            k1 = k7;
        }
        let factor = if ratio == F::zero() {
            c(5.0)
        } else {
            (c::<F>(0.9) * ratio.powf(c(-0.2))).min(c(5.0)).max(c(0.2))
        };
        h = h * factor;
        if (x + h) == x {
            return Err(RpmError::Integration(format!("step size underflow at x = {:?}", x.to_f64())));
        }
    }
    Err(RpmError::Integration(format!("more than {max_steps} steps")))
}
