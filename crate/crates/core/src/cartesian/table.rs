//! Registry of factorisations `T = AB` with `A ≅ B`, keyed by the orders
//! `(|T|, |A|, |A∩B|)`. Rows 3 and 4 are parametric and kept as metadata.

use serde::Serialize;

use super::CartesianError;

#[derive(Serialize, Clone, Copy, Debug, PartialEq, Eq)]
pub struct TableRow {
    pub row: u8,
    pub t: &'static str,
    pub a: &'static str,
    pub intersection: &'static str,
    pub executable: bool,
}

pub const ROWS: [TableRow; 4] = [
    TableRow { row: 1, t: "A6", a: "A5", intersection: "D10", executable: true },
    TableRow { row: 2, t: "M12", a: "M11", intersection: "PSL(2,11)", executable: true },
    TableRow { row: 3, t: "POmega8+(q)", a: "Omega7(q)", intersection: "G2(q)", executable: false },
    TableRow { row: 4, t: "Sp4(q), q >= 4 even", a: "Sp2(q^2).2", intersection: "D(q^2+1).2", executable: false },
];

fn gcd(a: u128, b: u128) -> u128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn checked_product(factors: &[u128]) -> Option<u128> {
    factors.iter().try_fold(1u128, |acc, &f| acc.checked_mul(f))
}

/// `(|T|, |A|, |A∩B|)` for a row at parameter `q` (ignored for rows 1, 2).
/// `None` on overflow or an invalid parameter.
pub fn row_orders(row: u8, q: u128) -> Option<(u128, u128, u128)> {
    match row {
        1 => Some((360, 60, 10)),
        2 => Some((95040, 7920, 660)),
        3 => {
            if !is_prime_power(q) {
                return None;
            }
            let p = |e: u32| q.checked_pow(e);
            let t = checked_product(&[p(12)?, p(2)? - 1, (p(4)? - 1), (p(4)? - 1), p(6)? - 1])?
                / gcd(4, p(4)? - 1);
            let a = checked_product(&[p(9)?, p(2)? - 1, p(4)? - 1, p(6)? - 1])? / gcd(2, q - 1);
            let g2 = checked_product(&[p(6)?, p(6)? - 1, p(2)? - 1])?;
            Some((t, a, g2))
        }
        4 => {
            if q < 4 || !q.is_power_of_two() {
                return None;
            }
            let p = |e: u32| q.checked_pow(e);
            let t = checked_product(&[p(4)?, p(2)? - 1, p(4)? - 1])?;
            let a = checked_product(&[2, p(2)?, p(4)? - 1])?;
            let d = checked_product(&[4, p(2)? + 1])?;
            Some((t, a, d))
        }
        _ => None,
    }
}

fn is_prime_power(q: u128) -> bool {
    if q < 2 {
        return false;
    }
    let mut p = 2;
    while p * p <= q && !q.is_multiple_of(p) {
        p += 1;
    }
    if p * p > q {
        return true;
    }
    let mut r = q;
    while r.is_multiple_of(p) {
        r /= p;
    }
    r == 1
}

#[derive(Serialize, Clone, Copy, Debug, PartialEq, Eq)]
pub struct RowMatch {
    pub row: TableRow,
    pub q: Option<u128>,
}

/// Parametric rows are searched for `q < 256`.
pub fn find_row(t: u128, a: u128, i: u128) -> Option<RowMatch> {
    for r in ROWS {
        match r.row {
            1 | 2 => {
                if row_orders(r.row, 0) == Some((t, a, i)) {
                    return Some(RowMatch { row: r, q: None });
                }
            }
            _ => {
                for q in 2..256 {
                    if row_orders(r.row, q) == Some((t, a, i)) {
                        return Some(RowMatch { row: r, q: Some(q) });
                    }
                }
            }
        }
    }
    None
}

/// The executable row matching the given orders. Parametric rows and
/// unknown triples are `UnsupportedRow`.
pub fn match_row(t: u128, a: u128, i: u128) -> Result<RowMatch, CartesianError> {
    match find_row(t, a, i) {
        Some(m) if m.row.executable => Ok(m),
        Some(m) => Err(CartesianError::UnsupportedRow(format!(
            "row {} ({} | {} | {}) with q = {} is metadata only",
            m.row.row,
            m.row.t,
            m.row.a,
            m.row.intersection,
            m.q.unwrap_or(0)
        ))),
        None => Err(CartesianError::UnsupportedRow(format!(
            "no row has orders ({t}, {a}, {i})"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn executable_rows() {
        assert_eq!(match_row(360, 60, 10).unwrap().row.row, 1);
        assert_eq!(match_row(95040, 7920, 660).unwrap().row.row, 2);
    }

    #[test]
    fn row3_at_q2_has_known_orders() {
        assert_eq!(row_orders(3, 2), Some((174_182_400, 1_451_520, 12_096)));
        let e = match_row(174_182_400, 1_451_520, 12_096).unwrap_err();
        assert!(matches!(e, CartesianError::UnsupportedRow(_)));
    }

    #[test]
    fn row4_at_q4() {
        // Sp4(4) = 979200, Sp2(16).2 = 8160, D17.2 = 68
        assert_eq!(row_orders(4, 4), Some((979_200, 8160, 68)));
        assert_eq!(row_orders(4, 2), None);
        assert_eq!(row_orders(4, 8), Some((8 * 8 * 8 * 8 * 63 * 4095, 2 * 64 * 4095, 260)));
        assert!(matches!(match_row(979_200, 8160, 68), Err(CartesianError::UnsupportedRow(_))));
    }

    #[test]
    fn unknown_triple() {
        assert!(find_row(60, 12, 2).is_none());
        assert!(matches!(match_row(60, 12, 2), Err(CartesianError::UnsupportedRow(_))));
    }

    #[test]
    fn large_parameters_do_not_overflow() {
        for q in [128u128, 251, 1 << 20] {
            let _ = row_orders(3, q);
            let _ = row_orders(4, q);
        }
    }
}
