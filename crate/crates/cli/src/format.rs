use std::f64::consts::LN_10;
use std::fmt::Write;

use num_rational::BigRational;

/// Decimal with 12 significant digits, trailing zeros trimmed.
pub fn sig12(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.11e}");
    let (mant, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..12).contains(&exp) {
        trim(format!("{:.*}", (11 - exp) as usize, x))
    } else {
        format!("{}e{exp}", trim(mant.to_string()))
    }
}

/// [`sig12`] of `exp(ln)`, valid far below the `f64` range.
pub fn sig12_from_ln(ln: f64) -> String {
    if ln == f64::NEG_INFINITY {
        return "0".into();
    }
    if ln > -700.0 {
        return sig12(ln.exp());
    }
    let l10 = ln / LN_10;
    let mut e = l10.floor();
    let mut m = format!("{:.11}", 10f64.powf(l10 - e));
    if m.starts_with("10") {
        e += 1.0;
        m = format!("{:.11}", 1.0);
    }
    format!("{}e{}", trim(m), e as i64)
}

fn trim(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

pub fn ratio(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Header plus rows, LF-terminated.
pub struct Csv {
    out: String,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        Csv {
            out: header.join(",") + "\n",
        }
    }

    pub fn row<S: AsRef<str>>(&mut self, cells: &[S]) {
        let line: Vec<&str> = cells.iter().map(AsRef::as_ref).collect();
        writeln!(self.out, "{}", line.join(",")).expect("write to string");
    }

    pub fn finish(self) -> String {
        self.out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_digits() {
        assert_eq!(sig12(0.3125), "0.3125");
        assert_eq!(sig12(1.0), "1");
        assert_eq!(sig12(2.0 / 3.0), "0.666666666667");
        assert_eq!(sig12(1.0 / 3.0 * 1e-7), "3.33333333333e-8");
        assert_eq!(sig12(123456789012345.0), "1.23456789012e14");
        assert_eq!(sig12(0.00012), "0.00012");
    }

    #[test]
    fn from_log() {
        assert_eq!(sig12_from_ln(0.5f64.ln()), "0.5");
        assert_eq!(sig12_from_ln(-1000.0 * LN_10), "1e-1000");
        assert_eq!(sig12_from_ln(2f64.ln() - 800.0 * LN_10), "2e-800");
        assert_eq!(sig12_from_ln(f64::NEG_INFINITY), "0");
    }

    #[test]
    fn csv_layout() {
        let mut c = Csv::new(&["d", "cdf"]);
        c.row(&["0", "0.5"]);
        assert_eq!(c.finish(), "d,cdf\n0,0.5\n");
    }
}
