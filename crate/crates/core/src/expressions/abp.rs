//! Layered algebraic branching programs and their conversion to
//! determinantal expressions.

use serde::Serialize;

use crate::algebra::{Degree, Field, Polynomial, VarSet};
use crate::error::{CapKind, Error, Result};
use crate::matforms::{AffineMatrixMap, DetAlgorithm};

pub const MAX_GRENET_SIZE: usize = 4;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AbpEdge {
    pub from: usize,
    pub to: usize,
    #[serde(serialize_with = "crate::expressions::poly_text")]
    pub label: Polynomial,
}

/// Layered DAG with one source (layer 0) and one sink (last layer).
#[derive(Clone, Debug)]
pub struct Abp {
    vars: VarSet,
    field: Field,
    layers: Vec<usize>,
    names: Vec<String>,
    edges: Vec<AbpEdge>,
    source: usize,
    sink: usize,
}

impl Abp {
    /// `layers[v]` is the layer of vertex `v`. Every edge must go from some
    /// layer `i` to layer `i + 1`; the source must be alone in layer 0 and
    /// the sink alone in the last layer.
    pub fn new(
        vars: &VarSet,
        field: Field,
        layers: Vec<usize>,
        names: Vec<String>,
        edges: Vec<AbpEdge>,
        source: usize,
        sink: usize,
    ) -> Result<Self> {
        let nv = layers.len();
        if names.len() != nv {
            return Err(Error::Arity {
                expected: nv,
                got: names.len(),
            });
        }
        if source >= nv || sink >= nv || source == sink {
            return Err(Error::Invalid("source and sink must be distinct vertices".into()));
        }
        let last = *layers.iter().max().expect("non-empty");
        if layers[source] != 0 || layers.iter().filter(|&&l| l == 0).count() != 1 {
            return Err(Error::Invalid("the source must be the only vertex of layer 0".into()));
        }
        if layers[sink] != last || layers.iter().filter(|&&l| l == last).count() != 1 {
            return Err(Error::Invalid(
                "the sink must be the only vertex of the last layer".into(),
            ));
        }
        for e in &edges {
            if e.from >= nv || e.to >= nv {
                return Err(Error::Invalid(format!("edge {} -> {} out of range", e.from, e.to)));
            }
            if layers[e.to] != layers[e.from] + 1 {
                return Err(Error::Invalid(format!(
                    "edge {} -> {} does not join consecutive layers",
                    names[e.from], names[e.to]
                )));
            }
            if e.label.vars() != vars || e.label.field() != field {
                return Err(Error::VarSetMismatch(e.label.vars().to_string(), vars.to_string()));
            }
            if let Degree::Finite(d) = e.label.degree() {
                if d > 1 {
                    return Err(Error::NotAffine {
                        degree: d,
                        context: format!(" on edge {} -> {}", names[e.from], names[e.to]),
                    });
                }
            }
        }
        Ok(Abp {
            vars: vars.clone(),
            field,
            layers,
            names,
            edges,
            source,
            sink,
        })
    }

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn vertex_count(&self) -> usize {
        self.layers.len()
    }

    pub fn edges(&self) -> &[AbpEdge] {
        &self.edges
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn layer(&self, v: usize) -> usize {
        self.layers[v]
    }

    /// Number of layers minus one: the common length of source-sink paths.
    pub fn depth(&self) -> usize {
        self.layers[self.sink]
    }

    fn topological(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.vertex_count()).collect();
        order.sort_by_key(|&v| (self.layers[v], v));
        order
    }

    /// Sum over source-sink paths of the product of edge labels.
    pub fn path_sum(&self) -> Result<Polynomial> {
        let zero = Polynomial::zero(&self.vars, self.field);
        let mut acc = vec![zero; self.vertex_count()];
        acc[self.source] = Polynomial::one(&self.vars, self.field);
        for v in self.topological() {
            if acc[v].is_zero() {
                continue;
            }
            let here = acc[v].clone();
            for e in self.edges.iter().filter(|e| e.from == v) {
                acc[e.to] = acc[e.to].add(&here.mul(&e.label)?)?;
            }
        }
        Ok(acc[self.sink].clone())
    }

    /// Number of source-sink paths.
    pub fn path_count(&self) -> u128 {
        let mut acc = vec![0u128; self.vertex_count()];
        acc[self.source] = 1;
        for v in self.topological() {
            for e in self.edges.iter().filter(|e| e.from == v) {
                acc[e.to] += acc[v];
            }
        }
        acc[self.sink]
    }
}

/// Subsets of `{1..n}` by layer; edge `S -> S ∪ {j}` carries `x_{|S|+1, j}`,
/// so every path picks one entry per row with distinct columns.
pub fn grenet_abp(n: usize, field: Field) -> Result<Abp> {
    if n == 0 || n > MAX_GRENET_SIZE {
        return Err(Error::SizeOutOfRange {
            what: "Grenet branching program",
            size: n,
            max: MAX_GRENET_SIZE,
        });
    }
    let vars = VarSet::matrix("x", n);
    let mut masks: Vec<u32> = (0..1u32 << n).collect();
    masks.sort_by_key(|m| (m.count_ones(), *m));
    let index_of = |mask: u32| masks.iter().position(|&m| m == mask).expect("subset");
    let layers: Vec<usize> = masks.iter().map(|m| m.count_ones() as usize).collect();
    let names: Vec<String> = masks
        .iter()
        .map(|&m| {
            let items: Vec<String> = (0..n)
                .filter(|j| m & (1 << j) != 0)
                .map(|j| (j + 1).to_string())
                .collect();
            format!("{{{}}}", items.join(","))
        })
        .collect();
    let mut edges = Vec::new();
    for &s in &masks {
        let row = s.count_ones() as usize;
        for j in (0..n).filter(|j| s & (1 << j) == 0) {
            edges.push(AbpEdge {
                from: index_of(s),
                to: index_of(s | (1 << j)),
                label: Polynomial::var(&vars, field, row * n + j)?,
            });
        }
    }
    Abp::new(&vars, field, layers, names, edges, index_of(0), index_of((1 << n) - 1))
}

/// Determinantal expression of size `#V - 1` for the path sum: the sink is
/// identified with the source, every other vertex gets a 1 on the diagonal
/// and entry `(u, v)` is the label of `u -> v`. Each path becomes a cycle
/// with sign `(-1)^(depth - 1)`, which is absorbed by scaling the first row.
/// The result is checked symbolically.
pub fn abp_to_determinant(abp: &Abp, laplace_cap: usize) -> Result<AffineMatrixMap> {
    let order = abp.topological();
    let mut index = vec![usize::MAX; abp.vertex_count()];
    let mut k = 1;
    for &v in &order {
        if v == abp.source || v == abp.sink {
            index[v] = 0;
        } else {
            index[v] = k;
            k += 1;
        }
    }
    let size = abp.vertex_count() - 1;
    if size > laplace_cap {
        return Err(Error::cap("abp determinant check", CapKind::MatrixSize(laplace_cap)));
    }
    let vars = abp.vars();
    let field = abp.field();
    let mut rows = vec![vec![Polynomial::zero(vars, field); size]; size];
    for (i, row) in rows.iter_mut().enumerate().skip(1) {
        row[i] = Polynomial::one(vars, field);
    }
    for e in abp.edges() {
        let (u, v) = (index[e.from], index[e.to]);
        rows[u][v] = rows[u][v].add(&e.label)?;
    }
    if abp.depth() % 2 == 0 {
        for c in rows[0].iter_mut() {
            *c = c.neg();
        }
    }
    let map = AffineMatrixMap::new(vars, field, rows)?;
    let target = abp.path_sum()?;
    let det = map.symbolic_det_capped(DetAlgorithm::LaplaceMemo, laplace_cap)?;
    if det == target {
        return Ok(map);
    }
    if det.neg() == target {
        return map.scale_row(0, &field.one().neg());
    }
    Err(Error::Invalid(
        "determinant of the converted branching program is not ± its path sum".into(),
    ))
}
