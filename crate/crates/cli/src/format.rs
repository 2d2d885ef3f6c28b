//! Number and matrix formatting shared by every command.

use pwlrec_core::RealMatrix;

const SIG_DIGITS: usize = 12;

/// 12 significant digits; scientific notation when `|x|` lies outside
/// `[1e-3, 1e6]`. Zero prints as `0`.
pub fn num(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let mag = x.abs();
    if !(1e-3..=1e6).contains(&mag) {
        return format!("{:.*e}", SIG_DIGITS - 1, x);
    }
    // Round to 12 significant digits first so the decimal count follows the
    // rounded magnitude (e.g. 999999.9999999 → 1000000).
    let sci = format!("{:.*e}", SIG_DIGITS - 1, x);
    let rounded: f64 = sci.parse().expect("formatted float");
    let exp = rounded.abs().log10().floor() as i32;
    let decimals = (SIG_DIGITS as i32 - 1 - exp).max(0) as usize;
    format!("{:.*}", decimals, rounded)
}

/// Rows of right-aligned columns, each line indented by two spaces.
pub fn matrix_block(m: &RealMatrix) -> String {
    let cells: Vec<Vec<String>> = (0..m.rows())
        .map(|i| m.row(i).iter().map(|v| num(*v)).collect())
        .collect();
    let width = cells.iter().flatten().map(String::len).max().unwrap_or(0);
    let mut out = String::new();
    for row in cells {
        out.push_str("  ");
        let line: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
        out.push_str(&line.join("  "));
        out.push('\n');
    }
    out
}

pub fn vector_block(v: &[f64]) -> String {
    matrix_block(&RealMatrix::column(v).expect("finite vector"))
}

/// Long-format CSV rows `quantity,row,col,value` for one matrix.
pub fn csv_matrix(out: &mut String, quantity: &str, m: &RealMatrix) {
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            out.push_str(&format!("{quantity},{i},{j},{}\n", num(m[(i, j)])));
        }
    }
}

pub const LONG_CSV_HEADER: &str = "quantity,row,col,value\n";
