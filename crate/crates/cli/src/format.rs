use num_complex::Complex64;

/// Rectangular table of preformatted cells.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OutputTable {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl OutputTable {
    pub fn new(headers: &[&str]) -> Self {
        Self {
            headers: headers.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        assert_eq!(row.len(), self.headers.len(), "ragged row {row:?}");
        self.rows.push(row);
    }

    /// Aligned columns separated by two spaces.
    pub fn render_table(&self) -> String {
        let mut widths: Vec<usize> = self.headers.iter().map(|h| h.chars().count()).collect();
        for row in &self.rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.chars().count());
            }
        }
        let line = |cells: &[String]| {
            let mut s = String::new();
            for (i, (cell, w)) in cells.iter().zip(&widths).enumerate() {
                if i > 0 {
                    s.push_str("  ");
                }
                s.push_str(cell);
                s.extend(std::iter::repeat_n(' ', w - cell.chars().count()));
            }
            s.trim_end().to_string()
        };
        let mut out = line(&self.headers);
        out.push('\n');
        let rule: Vec<String> = widths.iter().map(|&w| "-".repeat(w)).collect();
        out.push_str(&line(&rule));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&line(row));
            out.push('\n');
        }
        out
    }

    /// Header row plus data rows, comma separated, LF line endings.
    pub fn render_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(&self.headers).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 cells")
    }
}

/// 12 significant digits, trailing zeros kept. Scientific notation outside
/// `1e-5 ≤ |x| < 1e12`.
pub fn fmt_real(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return "0.00000000000".to_string();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{mantissa}e{exp}")
    }
}

/// `re+imi` / `re-imi`.
pub fn fmt_complex(z: Complex64) -> String {
    let sign = if z.im < 0.0 { '-' } else { '+' };
    format!("{}{}{}i", fmt_real(z.re), sign, fmt_real(z.im.abs()))
}

pub fn parse_complex(s: &str) -> Option<Complex64> {
    let body = s.strip_suffix('i')?;
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'))?;
    let re: f64 = body[..split].parse().ok()?;
    let im: f64 = body[split..].parse().ok()?;
    Some(Complex64::new(re, im))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(fmt_real(0.25), "0.250000000000");
        assert_eq!(fmt_real(1.0 / 3.0), "0.333333333333");
        assert_eq!(fmt_real(-1.0), "-1.00000000000");
        assert_eq!(fmt_real(1.0 / 12.0), "0.0833333333333");
        assert_eq!(fmt_real(0.0), "0.00000000000");
        assert_eq!(fmt_real(-0.0), "0.00000000000");
        assert_eq!(fmt_real(9.9999999999996), "10.0000000000");
        assert_eq!(fmt_real(1.5e-17), "1.50000000000e-17");
        assert_eq!(fmt_real(123456789012345.0), "1.23456789012e14");
    }

    #[test]
    fn complex_round_trip() {
        for z in [
            Complex64::new(-1.0, 0.0),
            Complex64::new(0.5, -0.5),
            Complex64::new(1.25e-9, 3.0e-20),
            Complex64::new(-2.0e13, -7.5),
        ] {
            let s = fmt_complex(z);
            let back = parse_complex(&s).unwrap();
            assert!((back - z).norm() <= 1e-11 * z.norm(), "{s}");
        }
        assert_eq!(fmt_complex(Complex64::new(-1.0, 0.0)), "-1.00000000000+0.00000000000i");
        assert_eq!(parse_complex("nonsense"), None);
    }

    #[test]
    fn tables_are_rectangular() {
        let mut t = OutputTable::new(&["a", "long header"]);
        t.push(vec!["1".into(), "x,y".into()]);
        assert_eq!(t.render_csv(), "a,long header\n1,\"x,y\"\n");
        let text = t.render_table();
        assert!(text.starts_with("a  long header\n"));
    }

    #[test]
    #[should_panic(expected = "ragged row")]
    fn ragged_rows_rejected() {
        OutputTable::new(&["a", "b"]).push(vec!["1".into()]);
    }
}
