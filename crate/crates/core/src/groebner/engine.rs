//! Buchberger's algorithm with Gebauer-Möller pair management and normal
//! pair selection, generic over the coefficient field.

use std::cmp::Reverse;
use std::collections::btree_map::Entry as MapEntry;
use std::collections::{BTreeMap, BinaryHeap};
use std::time::Instant;

use super::coeffs::Coeffs;
use super::{BasisStats, GroebnerConfig};
use crate::algebra::Monomial;
use crate::error::{CapKind, Error, Result};

/// Terms in decreasing degrevlex order, non-zero coefficients.
#[derive(Clone, Debug)]
pub(crate) struct GPoly<E> {
    pub terms: Vec<(Monomial, E)>,
}

impl<E> GPoly<E> {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lm(&self) -> &Monomial {
        &self.terms[0].0
    }
}

struct Element<E> {
    poly: GPoly<E>,
    lm: Monomial,
    mask: u64,
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    alive: bool,
}

pub(crate) struct Engine<'a, C: Coeffs> {
    ctx: &'a C,
    cfg: &'a GroebnerConfig,
    elements: Vec<Element<C::E>>,
    /// Indices of the current (Gebauer-Möller) basis.
    active: Vec<usize>,
    pairs: Vec<Pair>,
    queue: BinaryHeap<Reverse<(u32, usize)>>,
    pub stats: BasisStats,
    start: Instant,
}

impl<'a, C: Coeffs> Engine<'a, C> {
    pub fn new(ctx: &'a C, cfg: &'a GroebnerConfig) -> Self {
        Engine {
            ctx,
            cfg,
            elements: Vec::new(),
            active: Vec::new(),
            pairs: Vec::new(),
            queue: BinaryHeap::new(),
            stats: BasisStats::default(),
            start: Instant::now(),
        }
    }

    fn check_deadline(&self, stage: &str) -> Result<()> {
        if let Some(t) = self.cfg.timeout {
            if self.start.elapsed() > t {
                return Err(Error::cap(stage, CapKind::Timeout(t)));
            }
        }
        Ok(())
    }

    pub fn make_monic(&self, mut p: GPoly<C::E>) -> GPoly<C::E> {
        if let Some((_, lc)) = p.terms.first() {
            if !self.ctx.is_one(lc) {
                let inv = self.ctx.inv(lc);
                for (_, c) in p.terms.iter_mut() {
                    *c = self.ctx.mul(c, &inv);
                }
            }
        }
        p
    }

    fn find_reducer(&self, m: &Monomial, among: &[usize], skip: Option<usize>) -> Option<usize> {
        let mask = m.divmask();
        among.iter().copied().find(|&idx| {
            let e = &self.elements[idx];
            Some(idx) != skip && e.lm.degree() <= m.degree() && e.mask & !mask == 0 && e.lm.divides(m)
        })
    }

    /// Reduces `p` by the elements `among`. With `full == false` only the
    /// leading term is reduced away; the rest is returned untouched.
    fn reduce_by(&mut self, p: GPoly<C::E>, among: &[usize], skip: Option<usize>, full: bool) -> Result<GPoly<C::E>> {
        let ctx = self.ctx;
        let mut work: BTreeMap<Monomial, C::E> = p.terms.into_iter().collect();
        let mut rem: Vec<(Monomial, C::E)> = Vec::new();
        let mut steps = 0u64;
        while let Some((m, c)) = work.pop_last() {
            match self.find_reducer(&m, among, skip) {
                Some(idx) => {
                    let g = &self.elements[idx];
                    let q = g.lm.quotient_of(&m);
                    for (gm, gc) in &g.poly.terms[1..] {
                        let mm = gm.mul_unchecked(&q);
                        let v = ctx.mul(&c, gc);
                        match work.entry(mm) {
                            MapEntry::Occupied(mut o) => {
                                let nv = ctx.sub(o.get(), &v);
                                if ctx.is_zero(&nv) {
                                    o.remove();
                                } else {
                                    *o.get_mut() = nv;
                                }
                            }
                            MapEntry::Vacant(slot) => {
                                slot.insert(ctx.neg(&v));
                            }
                        }
                    }
                    steps += 1;
                    if steps % 512 == 0 {
                        self.check_deadline("buchberger reduction")?;
                    }
                }
                None => {
                    rem.push((m, c));
                    if !full {
                        rem.extend(work.into_iter().rev());
                        break;
                    }
                }
            }
        }
        self.stats.reduction_steps += steps;
        Ok(GPoly { terms: rem })
    }

    /// Full reduction by the current basis.
    pub fn normal_form(&mut self, p: GPoly<C::E>) -> Result<GPoly<C::E>> {
        let active = self.active.clone();
        self.reduce_by(p, &active, None, true)
    }

    fn spoly(&self, i: usize, j: usize, lcm: &Monomial) -> GPoly<C::E> {
        let ctx = self.ctx;
        let (a, b) = (&self.elements[i], &self.elements[j]);
        let qa = a.lm.quotient_of(lcm);
        let qb = b.lm.quotient_of(lcm);
        let ta = &a.poly.terms[1..];
        let tb = &b.poly.terms[1..];
        let mut out = Vec::with_capacity(ta.len() + tb.len());
        let (mut x, mut y) = (0, 0);
        // both monic: qa*a - qb*b with the leading terms cancelled
        while x < ta.len() || y < tb.len() {
            let ma = ta.get(x).map(|t| t.0.mul_unchecked(&qa));
            let mb = tb.get(y).map(|t| t.0.mul_unchecked(&qb));
            match (ma, mb) {
                (Some(ma), Some(mb)) => match ma.cmp(&mb) {
                    std::cmp::Ordering::Greater => {
                        out.push((ma, ta[x].1.clone()));
                        x += 1;
                    }
                    std::cmp::Ordering::Less => {
                        out.push((mb, ctx.neg(&tb[y].1)));
                        y += 1;
                    }
                    std::cmp::Ordering::Equal => {
                        let c = ctx.sub(&ta[x].1, &tb[y].1);
                        if !ctx.is_zero(&c) {
                            out.push((ma, c));
                        }
                        x += 1;
                        y += 1;
                    }
                },
                (Some(ma), None) => {
                    out.push((ma, ta[x].1.clone()));
                    x += 1;
                }
                (None, Some(mb)) => {
                    out.push((mb, ctx.neg(&tb[y].1)));
                    y += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        GPoly { terms: out }
    }

    fn push_pair(&mut self, i: usize, j: usize, lcm: Monomial) {
        let idx = self.pairs.len();
        self.queue.push(Reverse((lcm.degree(), idx)));
        self.pairs.push(Pair { i, j, lcm, alive: true });
        self.stats.pairs_created += 1;
    }

    /// Inserts a monic, top-reduced `h` and updates pairs and basis.
    fn insert(&mut self, h: GPoly<C::E>) {
        let lm = h.lm().clone();
        let mask = lm.divmask();
        let h_idx = self.elements.len();
        self.elements.push(Element {
            poly: h,
            lm: lm.clone(),
            mask,
        });
        self.stats.max_degree = self.stats.max_degree.max(lm.degree());

        if !self.cfg.use_criteria {
            for g in 0..h_idx {
                let l = self.elements[g].lm.lcm(&lm);
                self.push_pair(g, h_idx, l);
            }
            self.active.push(h_idx);
            return;
        }

        // new pairs (g, h): by increasing lcm, drop any whose lcm is a
        // multiple of an lcm already kept; coprime pairs win ties
        let mut candidates: Vec<(usize, Monomial, bool)> = self
            .active
            .iter()
            .map(|&g| {
                let glm = &self.elements[g].lm;
                (g, glm.lcm(&lm), glm.is_coprime(&lm))
            })
            .collect();
        candidates.sort_by(|a, b| a.1.cmp(&b.1).then(b.2.cmp(&a.2)).then(a.0.cmp(&b.0)));
        let mut kept: Vec<(usize, Monomial, bool)> = Vec::new();
        for (g, l, coprime) in candidates {
            if kept.iter().any(|(_, l2, _)| l2.divides(&l)) {
                self.stats.pairs_pruned += 1;
            } else {
                kept.push((g, l, coprime));
            }
        }
        // old pairs made redundant by h
        for p in self.pairs.iter_mut().filter(|p| p.alive) {
            if lm.divides(&p.lcm) {
                let li = self.elements[p.i].lm.lcm(&lm);
                let lj = self.elements[p.j].lm.lcm(&lm);
                if li != p.lcm && lj != p.lcm {
                    p.alive = false;
                    self.stats.pairs_pruned += 1;
                }
            }
        }
        // product criterion on the survivors
        kept.sort_by_key(|k| k.0);
        for (g, l, coprime) in kept {
            if coprime {
                self.stats.pairs_pruned += 1;
            } else {
                self.push_pair(g, h_idx, l);
            }
        }
        let elements = &self.elements;
        self.active.retain(|&g| !lm.divides(&elements[g].lm));
        self.active.push(h_idx);
    }

    pub fn run(&mut self, generators: Vec<GPoly<C::E>>) -> Result<()> {
        let mut gens: Vec<GPoly<C::E>> = generators.into_iter().filter(|g| !g.is_zero()).collect();
        gens.sort_by(|a, b| a.lm().cmp(b.lm()));
        for g in gens {
            let h = self.normal_form(g)?;
            if !h.is_zero() {
                let h = self.make_monic(h);
                self.insert(h);
            }
        }
        while let Some(Reverse((deg, idx))) = self.queue.pop() {
            if !self.pairs[idx].alive {
                continue;
            }
            self.pairs[idx].alive = false;
            self.check_deadline("buchberger")?;
            if let Some(cap) = self.cfg.max_degree {
                if deg > cap {
                    return Err(Error::cap("buchberger", CapKind::Degree(cap)));
                }
            }
            self.stats.pairs_reduced += 1;
            if let Some(cap) = self.cfg.max_pairs {
                if self.stats.pairs_reduced > cap {
                    return Err(Error::cap("buchberger", CapKind::Pairs(cap)));
                }
            }
            let (i, j, lcm) = {
                let p = &self.pairs[idx];
                (p.i, p.j, p.lcm.clone())
            };
            let s = self.spoly(i, j, &lcm);
            let active = self.active.clone();
            let h = self.reduce_by(s, &active, None, false)?;
            if h.is_zero() {
                self.stats.zero_reductions += 1;
                continue;
            }
            let h = self.make_monic(h);
            self.insert(h);
        }
        Ok(())
    }

    /// Minimal, fully inter-reduced, monic basis sorted by leading monomial.
    pub fn reduced_basis(&mut self) -> Result<Vec<GPoly<C::E>>> {
        let mut minimal: Vec<usize> = Vec::new();
        let mut cand = self.active.clone();
        cand.sort_by(|&a, &b| self.elements[a].lm.cmp(&self.elements[b].lm).then(a.cmp(&b)));
        for idx in cand {
            let lm = &self.elements[idx].lm;
            if !minimal.iter().any(|&k| self.elements[k].lm.divides(lm)) {
                minimal.push(idx);
            }
        }
        let mut out = Vec::with_capacity(minimal.len());
        for &idx in &minimal {
            let mut terms = self.elements[idx].poly.terms.clone();
            let head = terms.remove(0);
            let tail = self.reduce_by(GPoly { terms }, &minimal, Some(idx), true)?;
            let mut terms = Vec::with_capacity(tail.terms.len() + 1);
            terms.push(head);
            terms.extend(tail.terms);
            out.push(GPoly { terms });
        }
        self.stats.basis_size = out.len();
        self.stats.elapsed_ms = self.start.elapsed().as_millis() as u64;
        Ok(out)
    }
}

/// Normal form of `p` with respect to an already reduced basis.
pub(crate) fn reduce_with<C: Coeffs>(ctx: &C, basis: &[GPoly<C::E>], p: GPoly<C::E>) -> Result<GPoly<C::E>> {
    let cfg = GroebnerConfig::unbounded();
    let mut engine = Engine::new(ctx, &cfg);
    for g in basis {
        engine.elements.push(Element {
            lm: g.lm().clone(),
            mask: g.lm().divmask(),
            poly: g.clone(),
        });
    }
    engine.active = (0..basis.len()).collect();
    engine.normal_form(p)
}
