//! Support code for the acceptance run: reference values, printed-digit
//! matching, a two-sample Kolmogorov–Smirnov statistic and the property
//! suites.

pub mod properties;
pub mod reference;

/// Result of one check: a verdict plus a one-line explanation.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub pass: bool,
    pub detail: String,
}

impl Outcome {
    pub fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self { pass, detail: detail.into() }
    }
}

/// Significant digits in a printed value such as `6.84165E-01`.
pub fn printed_digits(printed: &str) -> usize {
    let mantissa = printed.split(['E', 'e']).next().unwrap_or("");
    mantissa.chars().filter(|c| c.is_ascii_digit()).count()
}

/// True when `x` rounds to exactly the printed string.
pub fn matches_printed(x: f64, printed: &str) -> bool {
    tailsum::experiment::format_sci(x, printed_digits(printed)) == printed
}

/// `sup |F_a − F_b|` of the two empirical CDFs. Sorts both slices.
pub fn ks_two_sample(a: &mut [f64], b: &mut [f64]) -> f64 {
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn printed_matching() {
        assert_eq!(printed_digits("6.84165E-01"), 6);
        assert_eq!(printed_digits("2.5128E-04"), 5);
        assert!(matches_printed(0.684164851, "6.84165E-01"));
        assert!(!matches_printed(0.684164, "6.84165E-01"));
        assert!(matches_printed(3.98109052e-6, "3.9811E-06"));
    }

    #[test]
    fn ks_statistic() {
        let mut a = vec![0.1, 0.2, 0.3, 0.4];
        let mut b = a.clone();
        assert_eq!(ks_two_sample(&mut a, &mut b), 0.0);
        let mut c = vec![0.5, 0.6, 0.7, 0.8];
        assert_eq!(ks_two_sample(&mut a, &mut c), 1.0);
        let mut d = vec![0.15, 0.25, 0.35, 0.45];
        assert_eq!(ks_two_sample(&mut a, &mut d), 0.25);
    }
}
