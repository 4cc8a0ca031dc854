//! Bessel functions, Chebyshev polynomials and a few combinatorial helpers.

const BIG: f64 = 1.0e250;
const BIG_INV: f64 = 1.0e-250;

/// Bessel function of the first kind J_n(x) for integer order n ≥ 0.
///
/// Orders 0 and 1 use the libm kernels. Higher orders use forward recurrence
/// when x > n and Miller's backward recurrence otherwise, normalised with
/// J_0 + 2 Σ J_{2k} = 1.
pub fn bessel_j(n: u32, x: f64) -> f64 {
    if x < 0.0 {
        let v = bessel_j(n, -x);
        return if n.is_multiple_of(2) { v } else { -v };
    }
    match n {
        0 => return libm::j0(x),
        1 => return libm::j1(x),
        _ => {}
    }
    if x == 0.0 {
        return 0.0;
    }
    let nf = n as f64;
    if x > nf {
        let mut jm = libm::j0(x);
        let mut j = libm::j1(x);
        for k in 1..n {
            let jp = (2.0 * k as f64 / x) * j - jm;
            jm = j;
            j = jp;
        }
        return j;
    }
    let scale = if nf > x { nf } else { x };
    let m = 2 * ((scale as u32 + 30 + libm::sqrt(160.0 * scale) as u32) / 2);
    let tox = 2.0 / x;
    let mut jsum = false;
    let mut bjp = 0.0;
    let mut bj = 1.0;
    let mut sum = 0.0;
    let mut ans = 0.0;
    for k in (1..=m).rev() {
        let bjm = k as f64 * tox * bj - bjp;
        bjp = bj;
        bj = bjm;
        if bj.abs() > BIG {
            bj *= BIG_INV;
            bjp *= BIG_INV;
            ans *= BIG_INV;
            sum *= BIG_INV;
        }
        if jsum {
            sum += bj;
        }
        jsum = !jsum;
        if k == n {
            ans = bjp;
        }
    }
    sum = 2.0 * sum - bj;
    ans / sum
}

/// J_n(x)/x for n ≥ 1, with a series expansion for |x| < 1e-3.
pub fn bessel_j_over_x(n: u32, x: f64) -> f64 {
    assert!(n >= 1, "bessel_j_over_x needs n >= 1");
    if x.abs() < 1.0e-3 {
        let h = 0.5 * x;
        let h2 = h * h;
        let nf = n as f64;
        let lead = libm::pow(h, nf - 1.0) * 0.5 / libm::exp(ln_factorial(n as u64));
        lead * (1.0 - h2 / (nf + 1.0) + h2 * h2 / (2.0 * (nf + 1.0) * (nf + 2.0)))
    } else {
        bessel_j(n, x) / x
    }
}

/// Natural log of the modified Bessel function I_n(x), x ≥ 0.
///
/// Power series summed with rescaling; all terms are positive.
pub fn ln_bessel_i(n: u32, x: f64) -> f64 {
    assert!(x >= 0.0, "ln_bessel_i needs x >= 0");
    if x == 0.0 {
        return if n == 0 { 0.0 } else { f64::NEG_INFINITY };
    }
    let nf = n as f64;
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut shift = 0.0;
    let mut k = 1.0;
    loop {
        term *= q / (k * (nf + k));
        sum += term;
        if sum > BIG {
            sum *= BIG_INV;
            term *= BIG_INV;
            shift += libm::log(BIG);
        }
        if term < sum * 1.0e-17 && k > q.sqrt() {
            break;
        }
        k += 1.0;
    }
    nf * libm::log(0.5 * x) - ln_factorial(n as u64) + libm::log(sum) + shift
}

/// Modified Bessel function I_n(x), x ≥ 0.
pub fn bessel_i(n: u32, x: f64) -> f64 {
    libm::exp(ln_bessel_i(n, x))
}

/// Chebyshev polynomial of the first kind T_n(x).
pub fn chebyshev_t(n: u32, x: f64) -> f64 {
    match n {
        0 => 1.0,
        1 => x,
        _ => {
            let (mut a, mut b) = (1.0, x);
            for _ in 1..n {
                let c = 2.0 * x * b - a;
                a = b;
                b = c;
            }
            b
        }
    }
}

/// Chebyshev polynomial of the second kind U_n(x).
pub fn chebyshev_u(n: u32, x: f64) -> f64 {
    match n {
        0 => 1.0,
        1 => 2.0 * x,
        _ => {
            let (mut a, mut b) = (1.0, 2.0 * x);
            for _ in 1..n {
                let c = 2.0 * x * b - a;
                a = b;
                b = c;
            }
            b
        }
    }
}

/// ln(n!).
pub fn ln_factorial(n: u64) -> f64 {
    if n < 2 {
        0.0
    } else {
        libm::lgamma(n as f64 + 1.0)
    }
}

/// ln C(n, k).
pub fn ln_binomial(n: u64, k: u64) -> f64 {
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

/// Upper tail P(X > n) of a Poisson variable with mean `mean`.
pub fn poisson_upper_tail(mean: f64, n: u64) -> f64 {
    if mean <= 0.0 {
        return 0.0;
    }
    let mut cdf = 0.0;
    let ln_mean = libm::log(mean);
    for k in 0..=n {
        cdf += libm::exp(k as f64 * ln_mean - mean - ln_factorial(k));
    }
    let head = 1.0 - cdf;
    // Direct sum of the tail avoids cancellation once the tail is tiny.
    if head < 1.0e-6 {
        let mut tail = 0.0;
        let mut k = n + 1;
        loop {
            let t = libm::exp(k as f64 * ln_mean - mean - ln_factorial(k));
            tail += t;
            if (k as f64 > mean && t < tail * 1.0e-18) || t == 0.0 {
                break;
            }
            k += 1;
        }
        tail
    } else {
        head
    }
}

/// (e^{ixt} - 1)/x, equal to i t at x = 0.
pub(crate) fn expm1_i_over(x: f64, t: f64) -> num_complex::Complex64 {
    let h = 0.5 * x * t;
    let sinc = if h.abs() < 1.0e-8 { 1.0 - h * h / 6.0 } else { libm::sin(h) / h };
    num_complex::Complex64::new(0.0, t) * num_complex::Complex64::from_polar(sinc, h)
}
