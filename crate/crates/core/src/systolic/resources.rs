//! Logic-element usage of synthesized cores and a linear predictor fitted to it.

use std::sync::OnceLock;

pub const L_SYMB: [u32; 4] = [4, 8, 12, 16];
pub const L_P_MAX: [usize; 4] = [8, 16, 24, 32];
pub const K_MAX: [usize; 4] = [1, 2, 3, 4];

/// Synthesis results indexed `[l_symb][l_p_max][K]` following the axes above.
pub const LE_TABLE: [[[u32; 4]; 4]; 4] = [
    [[557, 732, 822, 880], [1122, 1286, 1391, 1472], [1687, 1840, 1960, 2064], [2252, 2394, 2529, 2656]],
    [[626, 799, 895, 953], [1266, 1443, 1536, 1610], [1936, 2025, 2151, 2217], [2530, 2869, 3002, 3068]],
    [[701, 867, 962, 1019], [1403, 1579, 1670, 1738], [2165, 2233, 2352, 2402], [2790, 3163, 3269, 3359]],
    [[765, 940, 1031, 1090], [1543, 1706, 1810, 1865], [2349, 2438, 2547, 2616], [3067, 3428, 3537, 3616]],
];

/// One table row as `(l_symb, l_p_max, K, LE)`.
pub fn table_rows() -> impl Iterator<Item = (u32, usize, usize, u32)> {
    (0..4).flat_map(|s| {
        (0..4).flat_map(move |p| (0..4).map(move |k| (L_SYMB[s], L_P_MAX[p], K_MAX[k], LE_TABLE[s][p][k])))
    })
}

/// Table value, when the parameters are one of the synthesized points.
pub fn table_lookup(l_symb: u32, l_p_max: usize, k: usize) -> Option<u32> {
    let s = L_SYMB.iter().position(|&v| v == l_symb)?;
    let p = L_P_MAX.iter().position(|&v| v == l_p_max)?;
    let k = K_MAX.iter().position(|&v| v == k)?;
    Some(LE_TABLE[s][p][k])
}

/// Successive increments along `l_p_max` for fixed `(l_symb, K)`.
pub fn slice_differences(l_symb: u32, k: usize) -> Option<Vec<i64>> {
    let values: Vec<i64> = L_P_MAX
        .iter()
        .map(|&p| table_lookup(l_symb, p, k).map(i64::from))
        .collect::<Option<_>>()?;
    Some(values.windows(2).map(|w| w[1] - w[0]).collect())
}

/// `LE = a + b l_p_max + c K + d l_symb + e l_p_max l_symb`.
#[derive(Debug, Clone, PartialEq)]
pub struct LeModel {
    pub coefficients: [f64; 5],
    /// Relative error `(fit - table) / table` for every table row, in
    /// [`table_rows`] order.
    pub residuals: Vec<f64>,
}

fn features(l_symb: f64, l_p_max: f64, k: f64) -> [f64; 5] {
    [1.0, l_p_max, k, l_symb, l_p_max * l_symb]
}

impl LeModel {
    fn fit() -> Self {
        let mut ata = [[0.0f64; 5]; 5];
        let mut atb = [0.0f64; 5];
        for (s, p, k, le) in table_rows() {
            let x = features(s as f64, p as f64, k as f64);
            for i in 0..5 {
                atb[i] += x[i] * le as f64;
                for j in 0..5 {
                    ata[i][j] += x[i] * x[j];
                }
            }
        }
        let coefficients = solve(ata, atb);
        let mut model = LeModel {
            coefficients,
            residuals: Vec::new(),
        };
        model.residuals = table_rows()
            .map(|(s, p, k, le)| (model.predict(s, p, k) - le as f64) / le as f64)
            .collect();
        model
    }

    pub fn predict(&self, l_symb: u32, l_p_max: usize, k: usize) -> f64 {
        features(l_symb as f64, l_p_max as f64, k as f64)
            .iter()
            .zip(&self.coefficients)
            .map(|(x, c)| x * c)
            .sum()
    }

    pub fn max_abs_residual(&self) -> f64 {
        self.residuals.iter().fold(0.0, |m, r| m.max(r.abs()))
    }
}

// Gaussian elimination with partial pivoting.
fn solve<const N: usize>(mut a: [[f64; N]; N], mut b: [f64; N]) -> [f64; N] {
    for col in 0..N {
        let pivot = (col..N)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..N {
            let f = a[row][col] / a[col][col];
            let pivot_row = a[col];
            for (x, p) in a[row][col..].iter_mut().zip(&pivot_row[col..]) {
                *x -= f * p;
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0; N];
    for row in (0..N).rev() {
        let s: f64 = (row + 1..N).map(|c| a[row][c] * x[c]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    x
}

/// The model fitted to [`LE_TABLE`], computed on first use.
pub fn le_model() -> &'static LeModel {
    static MODEL: OnceLock<LeModel> = OnceLock::new();
    MODEL.get_or_init(LeModel::fit)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LeEstimate {
    pub value: f64,
    /// The parameters lie outside the synthesized range.
    pub extrapolated: bool,
}

pub fn le_estimate(l_symb: u32, l_p_max: usize, k: usize) -> LeEstimate {
    let inside = (4..=16).contains(&l_symb) && (8..=32).contains(&l_p_max) && (1..=4).contains(&k);
    LeEstimate {
        value: le_model().predict(l_symb, l_p_max, k),
        extrapolated: !inside,
    }
}
