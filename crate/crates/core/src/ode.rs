//! Adaptive Dormand–Prince 5(4) stepper for two-component linear systems.

pub(crate) type State = [f64; 2];

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

// fifth-order minus fourth-order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

#[derive(Debug, Clone, Copy)]
pub(crate) struct Stepper {
    pub rtol: f64,
    pub max_steps: usize,
}

#[inline]
fn axpy(y: &State, h: f64, terms: &[(f64, &State)]) -> State {
    let mut out = *y;
    for (c, k) in terms {
        out[0] += h * c * k[0];
        out[1] += h * c * k[1];
    }
    out
}

impl Stepper {
    /// Integrate y' = f(t, y) from `t0` to `t1` (either direction).
    ///
    /// Error control is relative to the vector norm of the solution, which
    /// suits the linear systems here whose overall scale is arbitrary.
    /// Returns `None` if the step budget is exhausted.
    pub fn integrate<F>(&self, f: &F, t0: f64, t1: f64, y0: State, h_hint: f64) -> Option<(State, f64)>
    where
        F: Fn(f64, &State) -> State,
    {
        let span = t1 - t0;
        if span == 0.0 {
            return Some((y0, h_hint));
        }
        let dir = span.signum();
        let mut h = h_hint.abs().min(span.abs()).max(1e-12 * span.abs().max(1.0)) * dir;
        let mut t = t0;
        let mut y = y0;
        let mut k1 = f(t, &y);
        for _ in 0..self.max_steps {
            if (t1 - t) * dir <= 0.0 {
                return Some((y, h.abs()));
            }
            let last = (t + h - t1) * dir >= 0.0;
            if last {
                h = t1 - t;
            }
            let k2 = f(t + C2 * h, &axpy(&y, h, &[(A21, &k1)]));
            let k3 = f(t + C3 * h, &axpy(&y, h, &[(A31, &k1), (A32, &k2)]));
            let k4 = f(t + C4 * h, &axpy(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
            let k5 = f(t + C5 * h, &axpy(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]));
            let k6 = f(t + h, &axpy(&y, h, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]));
            let y_new = axpy(&y, h, &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
            let k7 = f(t + h, &y_new);
            let err_vec = axpy(&[0.0, 0.0], h, &[(E1, &k1), (E3, &k3), (E4, &k4), (E5, &k5), (E6, &k6), (E7, &k7)]);
            let scale = norm(&y).max(norm(&y_new)).max(f64::MIN_POSITIVE);
            let err = norm(&err_vec) / (self.rtol * scale);
            if err <= 1.0 {
                t = if last { t1 } else { t + h };
                y = y_new;
                k1 = k7;
                let grow = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).min(5.0) };
                h *= grow;
                if last {
                    return Some((y, h.abs()));
                }
            } else {
                h *= (0.9 * err.powf(-0.2)).max(0.2);
            }
        }
        None
    }
}

#[inline]
fn norm(y: &State) -> f64 {
    y[0].abs().max(y[1].abs())
}
