//! Linear algebra over Z/m for non-prime m.
//!
//! Row spans are kept in Howell normal form: pivots are divisors of the
//! modulus, entries above a pivot are reduced modulo it, and annihilator
//! multiples of every row are inserted so that the span is closed under
//! taking leading-zero prefixes. This makes coset representatives canonical
//! and span membership a straight reduction.

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn modmul(a: u64, b: u64, m: u64) -> u64 {
    (a as u128 * b as u128 % m as u128) as u64
}

fn row_scale(row: &[u64], c: u64, m: u64) -> Vec<u64> {
    row.iter().map(|&x| modmul(x, c, m)).collect()
}

fn row_add_scaled(dst: &mut [u64], src: &[u64], c: u64, m: u64) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d = (*d + modmul(*s, c, m)) % m;
    }
}

fn row_sub_scaled(dst: &mut [u64], src: &[u64], c: u64, m: u64) {
    for (d, s) in dst.iter_mut().zip(src) {
        let sub = modmul(*s, c, m);
        *d = (*d + m - sub) % m;
    }
}

/// A unit u of Z/m with u * x == gcd(x, m) (mod m). m is small, search is fine.
fn normalizing_unit(x: u64, m: u64) -> u64 {
    let d = gcd(x, m);
    for u in 1..m {
        if gcd(u, m) == 1 && modmul(u, x, m) == d {
            return u;
        }
    }
    1
}

/// Extended gcd over the integers: returns (g, x, y) with a*x + b*y = g.
fn egcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = egcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

/// Howell normal form of the row span of `rows` in (Z/m)^ncols.
pub fn howell(rows: &[Vec<u64>], ncols: usize, m: u64) -> Vec<Vec<u64>> {
    assert!(m >= 2, "modulus must be at least 2");
    let mut basis: Vec<Option<Vec<u64>>> = vec![None; ncols];
    let mut queue: Vec<Vec<u64>> = rows
        .iter()
        .map(|r| {
            assert_eq!(r.len(), ncols, "row width mismatch");
            r.iter().map(|&x| x % m).collect()
        })
        .collect();

    while let Some(mut row) = queue.pop() {
        let mut col = match row.iter().position(|&x| x != 0) {
            Some(c) => c,
            None => continue,
        };
        loop {
            match basis[col].clone() {
                None => {
                    // Install with the pivot normalized to a divisor of m,
                    // then queue the annihilator multiple.
                    let u = normalizing_unit(row[col], m);
                    let normalized = row_scale(&row, u, m);
                    let pivot = normalized[col];
                    let ann = m / gcd(pivot, m);
                    if ann > 1 {
                        queue.push(row_scale(&normalized, ann, m));
                    }
                    basis[col] = Some(normalized);
                    break;
                }
                Some(b) => {
                    let (bp, rp) = (b[col] as i128, row[col] as i128);
                    if rp % bp == 0 {
                        row_sub_scaled(&mut row, &b, (rp / bp) as u64 % m, m);
                    } else {
                        // Unimodular 2x2 combination keeps the span intact.
                        let (g, x, y) = egcd(bp, rp);
                        let mi = m as i128;
                        let (x, y) = (x.rem_euclid(mi) as u64, y.rem_euclid(mi) as u64);
                        let mut new_b = row_scale(&b, x, m);
                        row_add_scaled(&mut new_b, &row, y, m);
                        let mut new_row = row_scale(&row, (bp / g) as u64 % m, m);
                        row_sub_scaled(&mut new_row, &b, (rp / g) as u64 % m, m);
                        let u = normalizing_unit(new_b[col], m);
                        let normalized = row_scale(&new_b, u, m);
                        let ann = m / gcd(normalized[col], m);
                        if ann > 1 {
                            queue.push(row_scale(&normalized, ann, m));
                        }
                        basis[col] = Some(normalized);
                        row = new_row;
                    }
                    match row.iter().position(|&x| x != 0) {
                        Some(c) => col = c,
                        None => break,
                    }
                }
            }
        }
    }

    // Reduce entries above each pivot modulo the pivot.
    let pivot_cols: Vec<usize> = (0..ncols).filter(|&c| basis[c].is_some()).collect();
    for &c in &pivot_cols {
        let b = basis[c].clone().unwrap();
        let pivot = b[c];
        for &c2 in &pivot_cols {
            if c2 < c {
                let row = basis[c2].as_mut().unwrap();
                let q = row[c] / pivot;
                if q > 0 {
                    row_sub_scaled(row, &b, q, m);
                }
            }
        }
    }

    pivot_cols.into_iter().map(|c| basis[c].clone().unwrap()).collect()
}

/// Canonical representative of `v` modulo the span of `h` (a Howell form).
pub fn reduce_vec(v: &[u64], h: &[Vec<u64>], m: u64) -> Vec<u64> {
    let mut v: Vec<u64> = v.iter().map(|&x| x % m).collect();
    for row in h {
        let c = row.iter().position(|&x| x != 0).expect("howell rows are nonzero");
        let q = v[c] / row[c];
        if q > 0 {
            row_sub_scaled(&mut v, row, q, m);
        }
    }
    v
}

pub fn in_span(v: &[u64], h: &[Vec<u64>], m: u64) -> bool {
    reduce_vec(v, h, m).iter().all(|&x| x == 0)
}

/// Tracked Howell form of [vectors; rels] with identity coefficients on the
/// `vectors` block; the shared backbone of `kernel` and `solve`.
fn tracked_howell(vectors: &[Vec<u64>], rels: &[Vec<u64>], ncols: usize, m: u64) -> Vec<Vec<u64>> {
    let k = vectors.len();
    let width = ncols + k;
    let mut rows = Vec::with_capacity(k + rels.len());
    for (i, v) in vectors.iter().enumerate() {
        let mut row = vec![0u64; width];
        row[..ncols].copy_from_slice(v);
        row[ncols + i] = 1;
        rows.push(row);
    }
    for r in rels {
        let mut row = vec![0u64; width];
        row[..ncols].copy_from_slice(r);
        rows.push(row);
    }
    howell(&rows, width, m)
}

/// Generators of { r in (Z/m)^k | sum_i r_i * vectors_i  lies in span(rels) }.
pub fn kernel(vectors: &[Vec<u64>], rels: &[Vec<u64>], ncols: usize, m: u64) -> Vec<Vec<u64>> {
    let h = tracked_howell(vectors, rels, ncols, m);
    h.iter()
        .filter(|row| row[..ncols].iter().all(|&x| x == 0))
        .map(|row| row[ncols..].to_vec())
        .collect()
}

/// Some r with sum_i r_i * vectors_i == target modulo span(rels), if any.
pub fn solve(vectors: &[Vec<u64>], rels: &[Vec<u64>], target: &[u64], m: u64) -> Option<Vec<u64>> {
    let ncols = target.len();
    let k = vectors.len();
    let h = tracked_howell(vectors, rels, ncols, m);
    let mut v: Vec<u64> = target.iter().map(|&x| x % m).collect();
    v.resize(ncols + k, 0);
    for row in &h {
        let c = row.iter().position(|&x| x != 0).unwrap();
        if c >= ncols {
            break;
        }
        let q = v[c] / row[c];
        if q > 0 {
            row_sub_scaled(&mut v, row, q, m);
        }
    }
    if v[..ncols].iter().any(|&x| x != 0) {
        return None;
    }
    // target - sum(coeffs * rows) hit zero on the left, so the negated
    // tracked block is a valid coefficient vector.
    Some(v[ncols..].iter().map(|&x| (m - x) % m).collect())
}
