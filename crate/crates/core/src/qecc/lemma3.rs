use super::QeccError;

/// Parameters of the long-message CSS code for `Th_n^t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lemma3Params {
    pub n: usize,
    pub t: usize,
    pub m: u64,
    /// Real solution of `N* log2 N* = 2mn / (t - n/2)`.
    pub n_star: f64,
    pub c: u64,
    /// Code length `cn`.
    pub big_n: u64,
    /// Bits per symbol, `ceil(log2 N)`.
    pub r: u32,
    pub k: u64,
    /// `2K - N >= ceil(m/r)`
    pub rate_ok: bool,
    /// `N - K >= c(n - t)`
    pub distance_ok: bool,
}

impl Lemma3Params {
    pub fn ok(&self) -> bool {
        self.rate_ok && self.distance_ok
    }

    /// Qubits per message qubit per party, `Nr / (mn)`.
    pub fn ratio(&self) -> f64 {
        (self.big_n as f64 * f64::from(self.r)) / (self.m as f64 * self.n as f64)
    }

    /// `32 / (2t - n)`.
    pub fn ratio_bound(&self) -> f64 {
        32.0 / (2 * self.t - self.n) as f64
    }
}

fn ceil_log2(x: u64) -> u32 {
    if x <= 1 {
        0
    } else {
        64 - (x - 1).leading_zeros()
    }
}

pub fn lemma3_params(n: usize, t: usize, m: u64) -> Result<Lemma3Params, QeccError> {
    if t > n || 2 * t <= n {
        return Err(QeccError::Params("need n/2 < t <= n"));
    }
    if m == 0 {
        return Err(QeccError::Params("need m >= 1"));
    }
    let target = 2.0 * m as f64 * n as f64 / (t as f64 - n as f64 / 2.0);
    // x log2 x is increasing on [1, inf) and 0 at x = 1.
    let (mut lo, mut hi) = (1.0f64, 2.0f64);
    while hi * libm::log2(hi) < target {
        hi *= 2.0;
    }
    while hi - lo > 1e-9 * hi.max(1.0) {
        let mid = 0.5 * (lo + hi);
        if mid * libm::log2(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let n_star = 0.5 * (lo + hi);
    let c = (libm::ceil(n_star / n as f64) as u64).max(1);
    let big_n = c * n as u64;
    let r = ceil_log2(big_n).max(1);
    let blocks = m.div_ceil(u64::from(r));
    // K = ceil(nc/2 + ceil(m/r)/2) = ceil((N + ceil(m/r)) / 2)
    let k = (big_n + blocks).div_ceil(2);
    Ok(Lemma3Params {
        n,
        t,
        m,
        n_star,
        c,
        big_n,
        r,
        k,
        rate_ok: 2 * k >= big_n + blocks,
        distance_ok: big_n >= k && big_n - k >= c * (n - t) as u64,
    })
}

/// Search horizon for [`m_min`].
pub const M_MIN_HORIZON: u64 = 4096;

/// Smallest `m` such that both inequalities hold for every `m' in m..=M_MIN_HORIZON`.
pub fn m_min(n: usize, t: usize) -> Result<u64, QeccError> {
    let mut min = 1;
    for m in 1..=M_MIN_HORIZON {
        if !lemma3_params(n, t, m)?.ok() {
            min = m + 1;
        }
    }
    Ok(min)
}
