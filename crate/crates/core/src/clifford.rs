//! Irreducible representations of the Clifford algebra C_{n,0}, built recursively.

use faer::{c64, Mat};

use crate::error::{invalid, Result};

#[derive(Clone, Debug)]
pub struct CliffordRep {
    n: usize,
    generators: Vec<Mat<c64>>,
    grading: Option<Mat<c64>>,
}

impl CliffordRep {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn spinor_dim(&self) -> usize {
        self.generators[0].nrows()
    }

    pub fn generators(&self) -> &[Mat<c64>] {
        &self.generators
    }

    pub fn generator(&self, i: usize) -> &Mat<c64> {
        &self.generators[i]
    }

    pub fn grading(&self) -> Option<&Mat<c64>> {
        self.grading.as_ref()
    }

    /// Assemble from explicit matrices. Used to build deliberately broken fixtures.
    pub fn from_parts(generators: Vec<Mat<c64>>, grading: Option<Mat<c64>>) -> Result<Self> {
        let Some(first) = generators.first() else {
            return invalid("at least one generator is required");
        };
        let s = first.nrows();
        let square = |m: &Mat<c64>| m.nrows() == s && m.ncols() == s;
        if !generators.iter().all(square) || !grading.iter().all(square) {
            return invalid("generators must share one square size");
        }
        Ok(Self {
            n: generators.len(),
            generators,
            grading,
        })
    }

    /// max |Γ_iΓ_j + Γ_jΓ_i − 2δ_ij| over all pairs.
    pub fn anticommutation_deviation(&self) -> f64 {
        let s = self.spinor_dim();
        let id = Mat::<c64>::identity(s, s);
        let mut dev = 0.0f64;
        for (i, a) in self.generators.iter().enumerate() {
            for (j, b) in self.generators.iter().enumerate() {
                let mut ac = a * b + b * a;
                if i == j {
                    ac -= &id + &id;
                }
                dev = dev.max(ac.norm_max());
            }
        }
        dev
    }

    /// Max deviation of Hermiticity across generators and grading.
    pub fn hermiticity_deviation(&self) -> f64 {
        self.generators
            .iter()
            .chain(self.grading.iter())
            .map(|g| (g - g.adjoint()).norm_max())
            .fold(0.0, f64::max)
    }

    /// Max over grading² = 1 and grading·Γ_i = −Γ_i·grading; zero when ungraded.
    pub fn grading_deviation(&self) -> f64 {
        let Some(g) = &self.grading else { return 0.0 };
        let s = self.spinor_dim();
        let mut dev = (g * g - Mat::<c64>::identity(s, s)).norm_max();
        for gen in &self.generators {
            dev = dev.max((g * gen + gen * g).norm_max());
        }
        dev
    }
}

pub fn spinor_dimension(n: usize) -> Result<usize> {
    if n < 1 {
        return invalid("Clifford rank must be at least 1");
    }
    Ok(1 << (n / 2))
}

pub fn build_clifford_rep(n: usize) -> Result<CliffordRep> {
    if n < 1 {
        return invalid("Clifford rank must be at least 1");
    }
    let one = c64::new(1.0, 0.0);
    let mut sigma: Vec<Mat<c64>> = vec![Mat::from_fn(1, 1, |_, _| one)];
    let mut k = 1;
    loop {
        // sigma holds the odd rep with k generators.
        let gamma = odd_to_even(&sigma);
        let next = even_to_odd(&gamma);
        if k == n {
            return Ok(CliffordRep {
                n,
                generators: sigma,
                grading: None,
            });
        }
        if k + 1 == n {
            let grading = next.last().cloned();
            return Ok(CliffordRep {
                n,
                generators: gamma,
                grading,
            });
        }
        sigma = next;
        k += 2;
    }
}

/// γ_i = [[0, σ_i], [σ_i, 0]] for i ≤ k, γ_{k+1} = i·[[0, −1], [1, 0]].
fn odd_to_even(sigma: &[Mat<c64>]) -> Vec<Mat<c64>> {
    let s = sigma[0].nrows();
    let zero = c64::new(0.0, 0.0);
    let mut out: Vec<Mat<c64>> = sigma
        .iter()
        .map(|m| {
            Mat::from_fn(2 * s, 2 * s, |i, j| match (i < s, j < s) {
                (true, false) => m[(i, j - s)],
                (false, true) => m[(i - s, j)],
                _ => zero,
            })
        })
        .collect();
    out.push(Mat::from_fn(2 * s, 2 * s, |i, j| {
        if i < s && j == i + s {
            c64::new(0.0, -1.0)
        } else if i >= s && j + s == i {
            c64::new(0.0, 1.0)
        } else {
            zero
        }
    }));
    out
}

/// Keeps γ_1..γ_{k+1} and appends σ_{k+2} = (−i)^{(k+1)/2} γ_1⋯γ_{k+1}.
fn even_to_odd(gamma: &[Mat<c64>]) -> Vec<Mat<c64>> {
    let s = gamma[0].nrows();
    let mut prod = Mat::<c64>::identity(s, s);
    for g in gamma {
        prod = &prod * g;
    }
    let m = gamma.len() / 2;
    let phase = c64::new(0.0, -1.0).powi(m as i32);
    let mut out = gamma.to_vec();
    out.push(Mat::from_fn(s, s, |i, j| phase * prod[(i, j)]));
    out
}
