//! Number rendering shared by every CSV writer.

use num_rational::Ratio;

/// `%g`-style rendering with 6 significant digits: fixed notation for
/// exponents in `[-5, 6)`, scientific otherwise, trailing zeros trimmed.
pub fn sig6(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() { "nan".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    // Round first so that e.g. 999999.7 picks the exponent of 1e6.
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..6).contains(&exp) {
        let decimals = (5 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// Exact decimal rendering of a non-negative rational with `places`
/// decimals, rounding half to even.
pub fn ratio_fixed(r: Ratio<u128>, places: u32) -> String {
    let scale = 10u128.pow(places);
    let num = *r.numer() * scale;
    let den = *r.denom();
    let (mut q, rem) = (num / den, num % den);
    match (2 * rem).cmp(&den) {
        std::cmp::Ordering::Greater => q += 1,
        std::cmp::Ordering::Equal if q % 2 == 1 => q += 1,
        _ => {}
    }
    let (int, frac) = (q / scale, q % scale);
    if places == 0 {
        int.to_string()
    } else {
        format!("{int}.{frac:0width$}", width = places as usize)
    }
}

/// Three-decimal rendering used by locality reports.
pub fn fixed3(numer: u128, denom: u128) -> String {
    ratio_fixed(Ratio::new(numer, denom), 3)
}
