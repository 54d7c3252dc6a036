use crate::dist::{JointDist2, MASS_TOL};
use crate::info::entropy;

struct DisjointSet {
    parent: Vec<usize>,
}

impl DisjointSet {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[rb.max(ra)] = ra.min(rb);
        }
    }
}

/// Common part of `X` and `Y`: connected components of the bipartite support
/// graph. Returns the component index of every supported `x` and `y` (`None`
/// for symbols of zero marginal mass) and the mass of each component.
#[allow(clippy::type_complexity)]
pub fn common_part(d: &JointDist2) -> (Vec<Option<usize>>, Vec<Option<usize>>, Vec<f64>) {
    let (nx, ny) = (d.nx(), d.ny());
    let mut sets = DisjointSet::new(nx + ny);
    for x in 0..nx {
        for y in 0..ny {
            if d.p(x, y) > MASS_TOL {
                sets.union(x, nx + y);
            }
        }
    }
    let (px, py) = (d.marginal_x(), d.marginal_y());
    let mut roots: Vec<usize> = Vec::new();
    let mut masses: Vec<f64> = Vec::new();
    let mut label =
        |root: usize, roots: &mut Vec<usize>| match roots.iter().position(|&r| r == root) {
            Some(k) => k,
            None => {
                roots.push(root);
                masses.push(0.0);
                roots.len() - 1
            }
        };
    let mut comp_x = vec![None; nx];
    for x in 0..nx {
        if px[x] > MASS_TOL {
            let root = sets.find(x);
            comp_x[x] = Some(label(root, &mut roots));
        }
    }
    let mut comp_y = vec![None; ny];
    for y in 0..ny {
        if py[y] > MASS_TOL {
            let root = sets.find(nx + y);
            comp_y[y] = Some(label(root, &mut roots));
        }
    }
    for x in 0..nx {
        for y in 0..ny {
            if let (Some(k), true) = (comp_x[x], d.p(x, y) > MASS_TOL) {
                masses[k] += d.p(x, y);
            }
        }
    }
    (comp_x, comp_y, masses)
}

/// Gács–Körner common information in bits: entropy of the component masses.
pub fn gk_common_info(d: &JointDist2) -> f64 {
    let (_, _, masses) = common_part(d);
    if masses.len() <= 1 {
        return 0.0;
    }
    entropy(&masses).max(0.0)
}
