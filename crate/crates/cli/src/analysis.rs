//! Extremum detection on sampled curves.

/// Interior local maxima whose topographic prominence exceeds `min_prominence`.
///
/// A flat top counts once, at its left edge, provided the curve falls on both sides.
pub fn local_maxima(values: &[f64], min_prominence: f64) -> Vec<usize> {
    let n = values.len();
    let mut peaks = Vec::new();
    let mut i = 1;
    while i + 1 < n {
        if values[i - 1] < values[i] {
            let mut j = i;
            while j + 1 < n && values[j + 1] == values[i] {
                j += 1;
            }
            if j + 1 < n && values[j + 1] < values[i] {
                if prominence(values, i) > min_prominence {
                    peaks.push(i);
                }
                i = j + 1;
                continue;
            }
        }
        i += 1;
    }
    peaks
}

pub fn local_minima(values: &[f64], min_prominence: f64) -> Vec<usize> {
    let negated: Vec<f64> = values.iter().map(|v| -v).collect();
    local_maxima(&negated, min_prominence)
}

/// Height of the peak at `i` above the higher of the two lowest points reachable on either
/// side before the curve rises above the peak.
pub fn prominence(values: &[f64], i: usize) -> f64 {
    let peak = values[i];
    let mut left_min = peak;
    for &v in values[..i].iter().rev() {
        if v > peak {
            break;
        }
        left_min = left_min.min(v);
    }
    let mut right_min = peak;
    for &v in &values[i + 1..] {
        if v > peak {
            break;
        }
        right_min = right_min.min(v);
    }
    peak - left_min.max(right_min)
}

/// A heat maximum paired with the nearest coherence minimum.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AlignmentPair {
    pub q_max_index: usize,
    pub q_max_time: f64,
    pub gamma_min_index: Option<usize>,
    pub gamma_min_time: Option<f64>,
    /// `|Δt|` between the two, when a minimum exists.
    pub gap: Option<f64>,
    /// The nearest `|Γ|` extremum of either kind is a minimum within the step tolerance.
    pub aligned: bool,
}

fn nearest(candidates: &[usize], i: usize) -> Option<usize> {
    candidates.iter().copied().min_by_key(|&c| c.abs_diff(i))
}

/// Pairs each local maximum of `q` with the nearest local minimum of `abs_gamma`.
pub fn align_extrema(
    times: &[f64],
    q: &[f64],
    abs_gamma: &[f64],
    min_prominence: f64,
    max_steps: usize,
) -> Vec<AlignmentPair> {
    let q_max = local_maxima(q, min_prominence);
    let g_min = local_minima(abs_gamma, min_prominence);
    let g_max = local_maxima(abs_gamma, min_prominence);
    q_max
        .into_iter()
        .map(|i| {
            let min = nearest(&g_min, i);
            let min_dist = min.map(|m| m.abs_diff(i));
            let max_dist = nearest(&g_max, i).map(|m| m.abs_diff(i));
            let aligned = match (min_dist, max_dist) {
                (Some(d), Some(e)) => d <= max_steps && d <= e,
                (Some(d), None) => d <= max_steps,
                _ => false,
            };
            AlignmentPair {
                q_max_index: i,
                q_max_time: times[i],
                gamma_min_index: min,
                gamma_min_time: min.map(|m| times[m]),
                gap: min.map(|m| (times[m] - times[i]).abs()),
                aligned,
            }
        })
        .collect()
}

/// `true` when every element is `<=` its predecessor.
pub fn non_increasing(values: &[f64]) -> bool {
    values.windows(2).all(|w| w[1] <= w[0])
}
