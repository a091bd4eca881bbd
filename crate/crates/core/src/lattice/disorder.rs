use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::{is_canonical, neg, sub, Boundary, Geometry, Site};

use super::ModelSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DisorderKind {
    /// Hoppings scaled by (1 + λω_{xy}) with ω symmetric in the bond.
    Bond,
    /// λω_x added to every orbital on site x.
    Onsite,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DisorderSpec {
    pub kind: DisorderKind,
    pub strength: f64,
    pub seed: u64,
}

impl DisorderSpec {
    pub fn new(kind: DisorderKind, strength: f64, seed: u64) -> Result<Self> {
        if !(strength >= 0.0) || !strength.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "disorder strength must be finite and non-negative, got {strength}"
            )));
        }
        Ok(Self {
            kind,
            strength,
            seed,
        })
    }

    pub fn clean() -> Self {
        Self {
            kind: DisorderKind::Bond,
            strength: 0.0,
            seed: 0,
        }
    }
}

/// One disorder configuration ω, values in [−½, ½).
///
/// Bond values are keyed by (site a, canonical displacement s) for the bond
/// joining a and a − s, so both orientations of a bond read the same entry.
#[derive(Clone, Debug, PartialEq)]
pub struct DisorderRealization {
    kind: DisorderKind,
    geometry: Geometry,
    displacements: Vec<Site>,
    values: Vec<f64>,
    seed_used: u64,
    index: u64,
}

impl DisorderRealization {
    /// Each value comes from its own ChaCha8 stream keyed by (seed, index, key),
    /// so realizations do not depend on iteration order.
    pub fn generate(spec: &ModelSpec, dis: &DisorderSpec, index: u64) -> Result<Self> {
        let g = spec.geometry();
        let displacements = match dis.kind {
            DisorderKind::Bond => spec.bond_displacements(),
            DisorderKind::Onsite => vec![[0; 3]],
        };
        let per_site = displacements.len();
        let mut key = [0u8; 32];
        key[..8].copy_from_slice(&dis.seed.to_le_bytes());
        key[8..16].copy_from_slice(&index.to_le_bytes());
        let mut rng = ChaCha8Rng::from_seed(key);
        let values = (0..g.n_sites() * per_site)
            .map(|stream| {
                rng.set_stream(stream as u64);
                rng.set_word_pos(0);
                rng.random::<f64>() - 0.5
            })
            .collect();
        Ok(Self {
            kind: dis.kind,
            geometry: g,
            displacements,
            values,
            seed_used: dis.seed,
            index,
        })
    }

    pub fn kind(&self) -> DisorderKind {
        self.kind
    }

    pub fn seed_used(&self) -> u64 {
        self.seed_used
    }

    pub fn index(&self) -> u64 {
        self.index
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Canonical displacements used as bond keys (only `[0,0,0]` for onsite).
    pub fn displacements(&self) -> &[Site] {
        &self.displacements
    }

    /// ω on the bond between site `x_rank` and x − r.
    pub fn bond_value(&self, x_rank: usize, r: &Site) -> f64 {
        let g = &self.geometry;
        let (anchor, s) = if is_canonical(r) {
            (x_rank, *r)
        } else {
            let (a, _) = g.wrap(sub(&g.site(x_rank), r));
            (g.rank(&a), neg(r))
        };
        let k = self
            .displacements
            .iter()
            .position(|d| *d == s)
            .expect("displacement not in the bond table");
        self.values[anchor * self.displacements.len() + k]
    }

    pub fn site_value(&self, x_rank: usize) -> f64 {
        self.values[x_rank]
    }

    pub(super) fn check_compatible(&self, spec: &ModelSpec) -> Result<()> {
        let g = spec.geometry();
        let ok = self.geometry.same_lattice(&g)
            && match self.kind {
                DisorderKind::Bond => self.displacements == spec.bond_displacements(),
                DisorderKind::Onsite => true,
            };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidArgument(
                "disorder realization was drawn for a different model".into(),
            ))
        }
    }
}

/// (t_a ω)_{x,y} = ω_{x−a, y−a} on the torus.
pub fn translate_disorder(r: &DisorderRealization, a: &Site) -> Result<DisorderRealization> {
    let g = r.geometry;
    if g.boundary != Boundary::Periodic {
        return Err(Error::UnsupportedBoundary(
            "disorder translations need a periodic box".into(),
        ));
    }
    let per_site = r.displacements.len();
    let mut values = vec![0.0; r.values.len()];
    for xr in 0..g.n_sites() {
        let (src, _) = g.wrap(sub(&g.site(xr), a));
        let sr = g.rank(&src);
        values[xr * per_site..(xr + 1) * per_site]
            .copy_from_slice(&r.values[sr * per_site..(sr + 1) * per_site]);
    }
    Ok(DisorderRealization {
        values,
        ..r.clone()
    })
}
