//! Aitken-accelerated convergence check on the log-likelihood trace.

/// Change below which the trace counts as stalled.
const STALL_FLOOR: f64 = 1e-12;

/// Convergence test on the last three trace entries.
///
/// With a_k = (l_{k+1} − l_k)/(l_k − l_{k−1}) the geometric extrapolation of
/// the limit is l∞ = l_k + (l_{k+1} − l_k)/(1 − a_k); the sequence counts as
/// converged when 0 ≤ l∞ − l_{k+1} < epsilon. A stalled trace
/// (l_{k+1} − l_k < 1e-12) also counts as converged, and traces shorter than
/// three entries never do.
pub fn aitken_converged(trace: &[f64], epsilon: f64) -> bool {
    let n = trace.len();
    if n < 3 {
        return false;
    }
    let (l_prev, l_mid, l_last) = (trace[n - 3], trace[n - 2], trace[n - 1]);
    let step = l_last - l_mid;
    if step < STALL_FLOOR {
        // Flat or decreasing tail: nothing left to gain.
        return true;
    }
    let prev_step = l_mid - l_prev;
    if prev_step.abs() < STALL_FLOOR {
        return false;
    }
    let a = step / prev_step;
    if (1.0 - a).abs() < STALL_FLOOR {
        // Linear growth extrapolates to infinity.
        return false;
    }
    let l_inf = l_mid + step / (1.0 - a);
    let residual = l_inf - l_last;
    (0.0..epsilon).contains(&residual)
}
