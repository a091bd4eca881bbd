use crate::error::{invalid, Result};

pub const MAX_DIM: usize = 3;

/// Integer lattice vector; components past `dim` are zero.
pub type Site = [i64; MAX_DIM];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Boundary {
    Open,
    Periodic,
}

/// Box of `size^dim` sites carrying `orbitals` internal states each.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Geometry {
    pub dim: usize,
    pub size: usize,
    pub orbitals: usize,
    pub boundary: Boundary,
}

impl Geometry {
    pub fn new(dim: usize, size: usize, orbitals: usize, boundary: Boundary) -> Result<Self> {
        if !(1..=MAX_DIM).contains(&dim) {
            return invalid(format!("dimension must be 1..=3, got {dim}"));
        }
        if size == 0 || orbitals == 0 {
            return invalid("size and orbital count must be positive");
        }
        Ok(Self {
            dim,
            size,
            orbitals,
            boundary,
        })
    }

    pub fn with_orbitals(self, orbitals: usize) -> Self {
        Self { orbitals, ..self }
    }

    pub fn n_sites(&self) -> usize {
        self.size.pow(self.dim as u32)
    }

    pub fn hilbert_dim(&self) -> usize {
        self.n_sites() * self.orbitals
    }

    pub fn site(&self, rank: usize) -> Site {
        let mut s = [0i64; MAX_DIM];
        let mut r = rank;
        for j in (0..self.dim).rev() {
            s[j] = (r % self.size) as i64;
            r /= self.size;
        }
        s
    }

    /// Row-major rank of a site inside the box. Panics in debug builds if outside.
    pub fn rank(&self, site: &Site) -> usize {
        let mut r = 0usize;
        for &c in site.iter().take(self.dim) {
            debug_assert!(c >= 0 && (c as usize) < self.size);
            r = r * self.size + c as usize;
        }
        r
    }

    pub fn contains(&self, site: &Site) -> bool {
        site.iter()
            .take(self.dim)
            .all(|&c| c >= 0 && (c as usize) < self.size)
    }

    /// Splits `site = reduced + size * winding` with `reduced` inside the box.
    pub fn wrap(&self, site: Site) -> (Site, Site) {
        let l = self.size as i64;
        let mut reduced = [0i64; MAX_DIM];
        let mut winding = [0i64; MAX_DIM];
        for j in 0..self.dim {
            reduced[j] = site[j].rem_euclid(l);
            winding[j] = site[j].div_euclid(l);
        }
        (reduced, winding)
    }

    /// Nearest-image representative with components in (−L/2, L/2].
    pub fn nearest_image(&self, disp: Site) -> Site {
        let l = self.size as i64;
        let mut out = [0i64; MAX_DIM];
        for j in 0..self.dim {
            let mut r = disp[j].rem_euclid(l);
            if 2 * r > l {
                r -= l;
            }
            out[j] = r;
        }
        out
    }

    /// `x − y`, reduced to the nearest image on a periodic box.
    pub fn displacement(&self, x: &Site, y: &Site) -> Site {
        let d = sub(x, y);
        match self.boundary {
            Boundary::Open => d,
            Boundary::Periodic => self.nearest_image(d),
        }
    }

    /// Euclidean length of `displacement(x, y)`.
    pub fn distance(&self, x: &Site, y: &Site) -> f64 {
        let d = self.displacement(x, y);
        d.iter().map(|&c| (c * c) as f64).sum::<f64>().sqrt()
    }

    /// Coordinates shifted so the box is centered on the origin: `x − ⌊L/2⌋`.
    pub fn centered(&self, site: &Site) -> [f64; MAX_DIM] {
        let h = (self.size / 2) as f64;
        let mut out = [0.0; MAX_DIM];
        for j in 0..self.dim {
            out[j] = site[j] as f64 - h;
        }
        out
    }

    pub fn same_lattice(&self, other: &Geometry) -> bool {
        self.dim == other.dim && self.size == other.size && self.boundary == other.boundary
    }
}

pub fn sub(a: &Site, b: &Site) -> Site {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub fn add(a: &Site, b: &Site) -> Site {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

pub fn neg(a: &Site) -> Site {
    [-a[0], -a[1], -a[2]]
}

/// Lexicographic sign of a lattice vector: true for zero or a positive leading component.
pub fn is_canonical(r: &Site) -> bool {
    for &c in r {
        if c != 0 {
            return c > 0;
        }
    }
    true
}
