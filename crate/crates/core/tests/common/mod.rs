//! Independent oracles shared by the integration and acceptance tests.
#![allow(dead_code)]

use ammonia_core::gtfp::{self, RegionRecord};
use ammonia_core::lp::LinearProgram;
use nalgebra::{DMatrix, DVector};
use rand::Rng;

/// Random LP with at most 6 variables and 8 rows that is feasible by
/// construction (built around a known nonnegative point) and bounded by a
/// budget row on the sum of the variables.
pub fn random_feasible_lp<R: Rng>(rng: &mut R) -> LinearProgram {
    let n = rng.gen_range(1..=6);
    let x0: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..2.0)).collect();
    let objective: Vec<f64> = (0..n).map(|_| rng.gen_range(-3.0..3.0)).collect();
    let mut lp = LinearProgram::new(objective);
    let budget: f64 = x0.iter().sum::<f64>() + rng.gen_range(0.5..5.0);
    lp = lp.leq(vec![1.0; n], budget);
    let extra = rng.gen_range(0..=7);
    let mut eq_rows = 0;
    for _ in 0..extra {
        let row: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let ax: f64 = row.iter().zip(&x0).map(|(a, x)| a * x).sum();
        match rng.gen_range(0..4) {
            0 | 1 => lp = lp.leq(row, ax + rng.gen_range(0.0..1.0)),
            2 => lp = lp.geq(row, ax - rng.gen_range(0.0..1.0)),
            _ if eq_rows + 1 < n => {
                eq_rows += 1;
                lp = lp.eq(row, ax);
            }
            _ => lp = lp.leq(row, ax + 0.5),
        }
    }
    lp
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Minimum objective over every basic feasible solution of the standard
/// form `[A_ub I; A_eq 0] [x; s] = b`, or `None` if no basis is feasible.
pub fn enumerate_optimum(lp: &LinearProgram) -> Option<f64> {
    let n = lp.num_vars();
    let m_ub = lp.a_ub.len();
    let m = m_ub + lp.a_eq.len();
    let cols = n + m_ub;
    let mut a = DMatrix::<f64>::zeros(m, cols);
    let mut b = DVector::<f64>::zeros(m);
    for (i, row) in lp.a_ub.iter().enumerate() {
        for j in 0..n {
            a[(i, j)] = row[j];
        }
        a[(i, n + i)] = 1.0;
        b[i] = lp.b_ub[i];
    }
    for (k, row) in lp.a_eq.iter().enumerate() {
        for j in 0..n {
            a[(m_ub + k, j)] = row[j];
        }
        b[m_ub + k] = lp.b_eq[k];
    }
    let mut best: Option<f64> = None;
    for basis in combinations(cols, m) {
        let sub = DMatrix::from_fn(m, m, |r, c| a[(r, basis[c])]);
        let lu = sub.clone().lu();
        let Some(xb) = lu.solve(&b) else { continue };
        // Reject near-singular bases whose solution does not reproduce b.
        if (&sub * &xb - &b).amax() > 1e-9 || xb.iter().any(|v| !v.is_finite()) {
            continue;
        }
        if xb.iter().any(|&v| v < -1e-10) {
            continue;
        }
        let obj: f64 = basis
            .iter()
            .zip(xb.iter())
            .filter(|(&j, _)| j < n)
            .map(|(&j, &v)| lp.objective[j] * v)
            .sum();
        best = Some(best.map_or(obj, |o: f64| o.min(obj)));
    }
    best
}

pub fn random_dmus<R: Rng>(rng: &mut R, count: usize) -> Vec<RegionRecord> {
    (0..count)
        .map(|i| RegionRecord {
            name: format!("R{i}"),
            energy_mtce: rng.gen_range(10.0..1500.0),
            labour_m: rng.gen_range(5.0..250.0),
            capital_busd: rng.gen_range(100.0..5000.0),
            co2_mt: rng.gen_range(50.0..3500.0),
            gdp_busd: rng.gen_range(100.0..6000.0),
        })
        .collect()
}

fn scores(records: &[RegionRecord]) -> Result<Vec<f64>, String> {
    let report = gtfp::gtfp_scores(records).map_err(|e| e.to_string())?;
    Ok(report.regions.iter().map(|r| r.gtfp).collect())
}

const SCORE_TOL: f64 = 1e-7;

/// Scores lie in (0, 1] and at least one region is efficient.
pub fn check_bounds(records: &[RegionRecord]) -> Result<(), String> {
    let s = scores(records)?;
    if s.iter().any(|&v| !(v > 0.0 && v <= 1.0 + SCORE_TOL)) {
        return Err(format!("score out of (0, 1]: {s:?}"));
    }
    if !s.iter().any(|&v| v >= 1.0 - SCORE_TOL) {
        return Err(format!("no efficient region: {s:?}"));
    }
    Ok(())
}

/// Rescaling any input or the output for all regions leaves scores unchanged.
pub fn check_units_invariance(records: &[RegionRecord], factors: [f64; 5]) -> Result<(), String> {
    let base = scores(records)?;
    let scaled: Vec<RegionRecord> = records
        .iter()
        .map(|r| RegionRecord {
            energy_mtce: r.energy_mtce * factors[0],
            labour_m: r.labour_m * factors[1],
            capital_busd: r.capital_busd * factors[2],
            co2_mt: r.co2_mt * factors[3],
            gdp_busd: r.gdp_busd * factors[4],
            ..r.clone()
        })
        .collect();
    let after = scores(&scaled)?;
    for (a, b) in base.iter().zip(&after) {
        if (a - b).abs() > 1e-6 {
            return Err(format!("units changed a score: {a} -> {b}"));
        }
    }
    Ok(())
}

/// A copy of region 0 that uses no more of any input and makes at least as
/// much output scores at least as high as region 0.
pub fn check_dominance(records: &[RegionRecord], shrink: f64, grow: f64) -> Result<(), String> {
    let mut with = records.to_vec();
    let r0 = &records[0];
    with.push(RegionRecord {
        name: "dominant".into(),
        energy_mtce: r0.energy_mtce * shrink,
        labour_m: r0.labour_m * shrink,
        capital_busd: r0.capital_busd * shrink,
        co2_mt: r0.co2_mt * shrink,
        gdp_busd: r0.gdp_busd * grow,
    });
    let s = scores(&with)?;
    let last = *s.last().unwrap();
    if last + SCORE_TOL < s[0] {
        return Err(format!("dominating region scored {last} below dominated {}", s[0]));
    }
    Ok(())
}

/// Adding an exact duplicate of a region changes no score.
pub fn check_clone_insensitivity(records: &[RegionRecord], which: usize) -> Result<(), String> {
    let base = scores(records)?;
    let mut with = records.to_vec();
    with.push(RegionRecord {
        name: "clone".into(),
        ..records[which].clone()
    });
    let after = scores(&with)?;
    for (a, b) in base.iter().zip(&after) {
        if (a - b).abs() > 1e-7 {
            return Err(format!("clone changed a score: {a} -> {b}"));
        }
    }
    if (after[which] - after[after.len() - 1]).abs() > 1e-7 {
        return Err("clone scored differently from its original".into());
    }
    Ok(())
}
