//! Fixed points of the limiting payoff-sampling polynomials
//! `w_k(p) = P(2X_k − Y_k < k)` and their slopes, against the published
//! three-decimal table.

use hawkdove::equilibria::symmetric_fixed_point;
use hawkdove::response::build_limit_payoff_response;
use hawkdove::Response64;
use serde::Serialize;

/// Allowed deviation from a three-decimal golden value.
pub const TOLERANCE: f64 = 5e-4;

/// `p^(k)` for `k = 1..20`.
pub const GOLDEN_FIXED_POINTS: [f64; 20] = [
    0.500, 0.579, 0.620, 0.649, 0.672, 0.690, 0.706, 0.720, 0.731, 0.741, 0.750, 0.758, 0.765, 0.773, 0.778,
    0.784, 0.789, 0.794, 0.799, 0.803,
];

/// `|w_k′(p^(k))|` for `k = 1..20`.
pub const GOLDEN_SLOPES: [f64; 20] = [
    1.0, 0.690, 0.618, 0.645, 0.690, 0.730, 0.763, 0.793, 0.818, 0.840, 0.861, 0.88, 0.899, 0.916, 0.932,
    0.948, 0.963, 0.978, 0.991, 1.001,
];

/// `|w_k′(p^(j))|`, row `k`, column `j`, for `k, j = 1..5`.
pub const GOLDEN_CROSS: [[f64; 5]; 5] = [
    [1.0, 1.0, 1.0, 1.0, 1.0],
    [0.5, 0.690, 0.812, 0.905, 0.981],
    [0.562, 0.560, 0.618, 0.687, 0.759],
    [0.625, 0.616, 0.623, 0.645, 0.679],
    [0.605, 0.642, 0.659, 0.673, 0.690],
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Entry {
    pub computed: f64,
    pub golden: f64,
}

impl Entry {
    pub fn deviation(&self) -> f64 {
        (self.computed - self.golden).abs()
    }

    pub fn matches(&self) -> bool {
        self.deviation() <= TOLERANCE
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub k: u32,
    pub fixed_point: Entry,
    pub slope: Entry,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Tables {
    pub rows: Vec<Row>,
    /// `cross[k−1][j−1]`.
    pub cross: Vec<Vec<Entry>>,
}

impl Tables {
    pub fn compute() -> Self {
        let polys: Vec<Response64> = (1..=20).map(build_limit_payoff_response).collect();
        let fixed: Vec<f64> = polys.iter().map(symmetric_fixed_point).collect();
        let rows = (0..20)
            .map(|i| Row {
                k: i as u32 + 1,
                fixed_point: Entry {
                    computed: fixed[i],
                    golden: GOLDEN_FIXED_POINTS[i],
                },
                slope: Entry {
                    computed: polys[i].derivative(fixed[i]).abs(),
                    golden: GOLDEN_SLOPES[i],
                },
            })
            .collect();
        let cross = (0..5)
            .map(|k| {
                (0..5)
                    .map(|j| Entry {
                        computed: polys[k].derivative(fixed[j]).abs(),
                        golden: GOLDEN_CROSS[k][j],
                    })
                    .collect()
            })
            .collect();
        Self { rows, cross }
    }

    /// Human-readable labels of all entries outside the tolerance.
    pub fn mismatches(&self) -> Vec<String> {
        let mut out = Vec::new();
        for r in &self.rows {
            if !r.fixed_point.matches() {
                out.push(format!("p({}) = {:.6} vs {:.3}", r.k, r.fixed_point.computed, r.fixed_point.golden));
            }
            if !r.slope.matches() {
                out.push(format!("|w'_{}(p({}))| = {:.6} vs {:.3}", r.k, r.k, r.slope.computed, r.slope.golden));
            }
        }
        for (k, row) in self.cross.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                if !e.matches() {
                    out.push(format!("|w'_{}(p({}))| = {:.6} vs {:.3}", k + 1, j + 1, e.computed, e.golden));
                }
            }
        }
        out
    }

    pub fn to_text(&self) -> String {
        let flag = |e: &Entry| if e.matches() { "" } else { "  MISMATCH" };
        let mut s = String::from("k   p(k)      golden  |w'(p(k))|  golden\n");
        for r in &self.rows {
            s.push_str(&format!(
                "{:<3} {:.6}  {:.3}   {:.6}    {:.3}{}{}\n",
                r.k,
                r.fixed_point.computed,
                r.fixed_point.golden,
                r.slope.computed,
                r.slope.golden,
                flag(&r.fixed_point),
                flag(&r.slope)
            ));
        }
        s.push_str("\n|w_k'(p(j))|, rows k = 1..5, columns j = 1..5 (golden in brackets)\n");
        for (k, row) in self.cross.iter().enumerate() {
            s.push_str(&format!("{}:", k + 1));
            for e in row {
                s.push_str(&format!(" {:.4} [{:.3}]{}", e.computed, e.golden, if e.matches() { "" } else { "*" }));
            }
            s.push('\n');
        }
        s
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("table,k,j,computed,golden,deviation,match\n");
        for r in &self.rows {
            for (name, e) in [("fixed_point", &r.fixed_point), ("slope", &r.slope)] {
                s.push_str(&format!("{name},{},{},{},{},{},{}\n", r.k, r.k, e.computed, e.golden, e.deviation(), e.matches()));
            }
        }
        for (k, row) in self.cross.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                s.push_str(&format!("cross,{},{},{},{},{},{}\n", k + 1, j + 1, e.computed, e.golden, e.deviation(), e.matches()));
            }
        }
        s
    }
}
