//! Reference computations that share no code with the library's linear
//! algebra: rational elimination for ranks, determinantal divisors for
//! torsion, and exhaustive enumeration over finite coefficient rings.

#![allow(dead_code)]

use zcohom::monoid::{Elem, MonoidTable, MonoidWithZero};

/// Rank over Q by integer elimination, each row divided by its content.
pub fn rank(rows: &[Vec<i64>]) -> usize {
    let mut a: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let ncols = a.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..a.len()).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..a.len() {
            if a[i][c] == 0 {
                continue;
            }
            let (x, y) = (a[r][c], a[i][c]);
            for j in 0..ncols {
                a[i][j] = x * a[i][j] - y * a[r][j];
            }
            let g = a[i].iter().fold(0, |g, &v| gcd(g, v));
            if g > 1 {
                a[i].iter_mut().for_each(|v| *v /= g);
            }
        }
        r += 1;
    }
    r
}

fn det(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a = m.to_vec();
    let mut sign = 1;
    let mut prev = 1;
    for k in 0..n {
        if a[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&i| a[i][k] != 0) else {
                return 0;
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[k][k] * a[i][j] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Invariant factors `d_k = Δ_k / Δ_{k−1}`, where `Δ_k` is the gcd of all
/// `k × k` minors. Only the factors greater than one are returned.
pub fn torsion_by_minors(rows: &[Vec<i64>]) -> Vec<i64> {
    let a: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let (nr, nc) = (a.len(), a.first().map_or(0, Vec::len));
    let mut prev = 1i128;
    let mut out = Vec::new();
    for k in 1..=nr.min(nc) {
        let mut g = 0i128;
        for rs in subsets(nr, k) {
            for cs in subsets(nc, k) {
                let minor: Vec<Vec<i128>> = rs.iter().map(|&i| cs.iter().map(|&j| a[i][j]).collect()).collect();
                g = gcd(g, det(&minor));
                if g == 1 {
                    break;
                }
            }
            if g == 1 {
                break;
            }
        }
        if g == 0 {
            break;
        }
        let d = g / prev;
        if d > 1 {
            out.push(d as i64);
        }
        prev = g;
    }
    out
}

/// `(free rank, torsion)` of `H^n` for a complex of free groups given by
/// `d_prev : C^{n−1} → C^n` and `d_next : C^n → C^{n+1}` as row lists.
pub fn cohomology_of_free(dim: usize, d_prev: &[Vec<i64>], d_next: &[Vec<i64>]) -> (usize, Vec<i64>) {
    let free = dim - rank(d_next) - rank(d_prev);
    (free, torsion_by_minors(d_prev))
}

fn tuples(k: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..n).map(move |x| {
                    let mut t = t.clone();
                    t.push(x);
                    t
                })
            })
            .collect();
    }
    out
}

/// Classical inhomogeneous coboundary `C^n(G, Z) → C^{n+1}(G, Z)` for a
/// group table with trivial action, as rows.
pub fn group_coboundary(g: &MonoidTable, n: usize) -> Vec<Vec<i64>> {
    let order = g.names.len();
    let src = tuples(n, order);
    let index = |t: &[usize]| t.iter().fold(0, |acc, &x| acc * order + x);
    tuples(n + 1, order)
        .iter()
        .map(|t| {
            let mut row = vec![0i64; src.len()];
            row[index(&t[1..])] += 1;
            for i in 0..n {
                let mut s = t[..i].to_vec();
                s.push(g.table[t[i]][t[i + 1]]);
                s.extend_from_slice(&t[i + 2..]);
                row[index(&s)] += if (i + 1) % 2 == 0 { 1 } else { -1 };
            }
            row[index(&t[..n])] += if (n + 1).is_multiple_of(2) { 1 } else { -1 };
            row
        })
        .collect()
}

/// `H^n(G, Z)` with trivial action, as `(free rank, torsion)`.
pub fn group_cohomology(g: &MonoidTable, n: usize) -> (usize, Vec<i64>) {
    let order = g.names.len();
    let dim = order.pow(n as u32);
    let d_prev = if n == 0 { vec![Vec::new(); dim] } else { group_coboundary(g, n - 1) };
    cohomology_of_free(dim, &d_prev, &group_coboundary(g, n))
}

/// Nerve tuples of length `k`, found by filtering every tuple.
pub fn nerve_tuples(m: &MonoidWithZero, k: usize) -> Vec<Vec<Elem>> {
    tuples(k, m.order())
        .into_iter()
        .filter(|t| t.iter().fold(m.identity(), |p, &x| m.mul(p, x)) != m.zero())
        .collect()
}

/// Order of `H^2` with coefficients in the 0-module `Z/p` on which each
/// element acts by the scalar `action[s]`, by listing every 2-cochain and
/// every 1-cochain.
pub fn brute_force_h2_order(m: &MonoidWithZero, p: u64, action: &[u64]) -> u64 {
    let n1 = nerve_tuples(m, 1);
    let n2 = nerve_tuples(m, 2);
    let n3 = nerve_tuples(m, 3);
    let pos2 = |t: &[Elem]| n2.iter().position(|u| u == t).unwrap();
    let pos1 = |t: &[Elem]| n1.iter().position(|u| u == t).unwrap();
    let modp = |x: i64| x.rem_euclid(p as i64) as u64;
    // δf(a, b, c) = a·f(b, c) − f(ab, c) + f(a, bc) − f(a, b)
    let cocycle = |f: &[u64]| {
        n3.iter().all(|t| {
            let (a, b, c) = (t[0], t[1], t[2]);
            let v = action[a] as i64 * f[pos2(&[b, c])] as i64 - f[pos2(&[m.mul(a, b), c])] as i64
                + f[pos2(&[a, m.mul(b, c)])] as i64
                - f[pos2(&[a, b])] as i64;
            modp(v) == 0
        })
    };
    // δg(a, b) = a·g(b) − g(ab) + g(a)
    let coboundary = |g: &[u64]| -> Vec<u64> {
        n2.iter()
            .map(|t| {
                let (a, b) = (t[0], t[1]);
                modp(action[a] as i64 * g[pos1(&[b])] as i64 - g[pos1(&[m.mul(a, b)])] as i64 + g[pos1(&[a])] as i64)
            })
            .collect()
    };
    let mut cocycles = 0u64;
    let total = p.pow(n2.len() as u32);
    for code in 0..total {
        let f = digits(code, p, n2.len());
        if cocycle(&f) {
            cocycles += 1;
        }
    }
    let mut boundaries = std::collections::BTreeSet::new();
    for code in 0..p.pow(n1.len() as u32) {
        boundaries.insert(coboundary(&digits(code, p, n1.len())));
    }
    assert_eq!(cocycles % boundaries.len() as u64, 0, "coboundaries must be cocycles");
    cocycles / boundaries.len() as u64
}

fn digits(mut code: u64, p: u64, len: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push(code % p);
        code /= p;
    }
    out
}
