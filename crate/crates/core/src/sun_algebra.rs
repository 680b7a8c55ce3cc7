//! Generalized Gell-Mann generators of SU(N) and their structure constants.
//!
//! The basis is the `N^2 - 1` traceless Hermitian matrices `L_a` normalized
//! to `Tr(L_a L_b) = 2 delta_ab`. Ordering is canonical for this crate (the
//! tensors' signs depend on it): for each column pair `(j, k)` with `j < k`,
//! grouped by increasing `k`, emit the symmetric then the antisymmetric
//! off-diagonal generator, and close each group with the diagonal generator
//! `sqrt(2/(l(l+1))) diag(1, ..., 1, -l, 0, ..., 0)` (`l = k - 1` ones).
//! At N = 2 this yields the Pauli matrices in the order (x, y, z); at N = 3,
//! the eight Gell-Mann matrices in standard order.
//!
//! The antisymmetric constants `f_abc` and symmetric constants `d_abc` both
//! come out of a single trace per index triple,
//! `Tr(L_a L_b L_c) = 2 (d_abc + i f_abc)`,
//! and are stored sparsely on sorted triples with the permutation symmetry
//! used to reconstruct everything else.

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{max_entry_abs, trace_product, CMatrix};
use crate::par::{self, ExecMode};

/// Version tag of the generator ordering and tensor layout. Stored in disk
/// caches and echoed in reports; bump if the basis convention ever changes.
pub const ORDERING_VERSION: &str = "gm-colex-1";

/// Tolerance for exact-algebra checks (generator entries are small
/// rationals and roots, so residuals are pure float noise).
pub const ALGEBRA_TOL: f64 = 1e-12;
/// Tolerance for composed identities (one tensor contraction deep).
pub const IDENTITY_TOL: f64 = 1e-10;
/// Tensor entries below this are dropped from the sparse maps.
const TENSOR_DROP_TOL: f64 = 1e-13;

/// The ordered basis `L_1 .. L_{N^2-1}` for one N.
#[derive(Debug, Clone)]
pub struct GeneratorSet {
    n: usize,
    matrices: Vec<CMatrix>,
}

impl GeneratorSet {
    pub fn dim(&self) -> usize {
        self.n
    }

    /// Number of generators, `N^2 - 1`.
    pub fn count(&self) -> usize {
        self.matrices.len()
    }

    pub fn matrices(&self) -> &[CMatrix] {
        &self.matrices
    }

    /// The `a`-th generator (0-based).
    pub fn get(&self, a: usize) -> &CMatrix {
        &self.matrices[a]
    }
}

/// Build the generator basis for SU(N).
pub fn build_generators(n: usize) -> Result<GeneratorSet> {
    if n < 2 {
        return Err(Error::DimensionTooSmall(n));
    }
    let mut matrices = Vec::with_capacity(n * n - 1);
    for k in 1..n {
        for j in 0..k {
            let mut sym = CMatrix::zeros(n, n);
            sym[(j, k)] = Complex64::new(1.0, 0.0);
            sym[(k, j)] = Complex64::new(1.0, 0.0);
            matrices.push(sym);

            let mut asym = CMatrix::zeros(n, n);
            asym[(j, k)] = Complex64::new(0.0, -1.0);
            asym[(k, j)] = Complex64::new(0.0, 1.0);
            matrices.push(asym);
        }
        let l = k;
        let scale = (2.0 / (l as f64 * (l as f64 + 1.0))).sqrt();
        let mut diag = CMatrix::zeros(n, n);
        for m in 0..l {
            diag[(m, m)] = Complex64::new(scale, 0.0);
        }
        diag[(l, l)] = Complex64::new(-scale * l as f64, 0.0);
        matrices.push(diag);
    }
    debug_assert_eq!(matrices.len(), n * n - 1);
    Ok(GeneratorSet { n, matrices })
}

/// One stored tensor entry at a sorted index triple.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TensorEntry {
    pub indices: [u16; 3],
    pub value: f64,
}

/// Sort three indices, tracking the permutation parity.
fn sort3(a: u16, b: u16, c: u16) -> ([u16; 3], f64) {
    let mut idx = [a, b, c];
    let mut sign = 1.0;
    if idx[0] > idx[1] {
        idx.swap(0, 1);
        sign = -sign;
    }
    if idx[1] > idx[2] {
        idx.swap(1, 2);
        sign = -sign;
    }
    if idx[0] > idx[1] {
        idx.swap(0, 1);
        sign = -sign;
    }
    (idx, sign)
}

fn lookup(entries: &[TensorEntry], key: [u16; 3]) -> f64 {
    entries
        .binary_search_by(|e| e.indices.cmp(&key))
        .map(|pos| entries[pos].value)
        .unwrap_or(0.0)
}

/// Totally antisymmetric sparse rank-3 tensor; entries live on strictly
/// increasing triples, every other value is reconstructed by parity.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AntisymmetricTensor {
    dim: usize,
    entries: Vec<TensorEntry>,
}

impl AntisymmetricTensor {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    /// Canonical entries at strictly increasing triples, lexicographic order.
    pub fn entries(&self) -> &[TensorEntry] {
        &self.entries
    }

    pub fn get(&self, a: usize, b: usize, c: usize) -> f64 {
        if a == b || b == c || a == c {
            return 0.0;
        }
        let (key, sign) = sort3(a as u16, b as u16, c as u16);
        sign * lookup(&self.entries, key)
    }
}

/// Totally symmetric sparse rank-3 tensor; entries live on non-decreasing
/// triples.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SymmetricTensor {
    dim: usize,
    entries: Vec<TensorEntry>,
}

impl SymmetricTensor {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    /// Canonical entries at non-decreasing triples, lexicographic order.
    pub fn entries(&self) -> &[TensorEntry] {
        &self.entries
    }

    pub fn get(&self, a: usize, b: usize, c: usize) -> f64 {
        let (key, _) = sort3(a as u16, b as u16, c as u16);
        lookup(&self.entries, key)
    }
}

/// The `f_abc` and `d_abc` tensors of one SU(N) basis.
#[derive(Debug, Clone)]
pub struct StructureTensors {
    n: usize,
    pub f: AntisymmetricTensor,
    pub d: SymmetricTensor,
}

impl StructureTensors {
    pub fn dim(&self) -> usize {
        self.n
    }

    /// Generator count `N^2 - 1` (index range of the tensors).
    pub fn count(&self) -> usize {
        self.n * self.n - 1
    }
}

/// Compute both structure tensors from a generator set.
pub fn build_structure_tensors(gens: &GeneratorSet) -> StructureTensors {
    build_structure_tensors_mode(gens, ExecMode::auto())
}

/// As [`build_structure_tensors`], with an explicit execution mode for the
/// pair loop (bench hook).
pub fn build_structure_tensors_mode(gens: &GeneratorSet, mode: ExecMode) -> StructureTensors {
    let m = gens.count();
    // Pair products L_b L_c for b <= c; each yields the traces for all a <= b.
    let mut pairs = Vec::with_capacity(m * (m + 1) / 2);
    for b in 0..m {
        for c in b..m {
            pairs.push((b, c));
        }
    }
    // (a, b, c, d_abc, f_abc) rows per pair
    type TraceRow = (u16, u16, u16, f64, f64);
    let per_pair: Vec<Vec<TraceRow>> = par::map_slice(mode, &pairs, |&(b, c)| {
        let prod = gens.get(b) * gens.get(c);
        (0..=b)
            .map(|a| {
                let t = trace_product(gens.get(a), &prod);
                (a as u16, b as u16, c as u16, t.re / 2.0, t.im / 2.0)
            })
            .collect()
    });

    let mut f_entries = Vec::new();
    let mut d_entries = Vec::new();
    for chunk in per_pair {
        for (a, b, c, d_val, f_val) in chunk {
            if d_val.abs() > TENSOR_DROP_TOL {
                d_entries.push(TensorEntry {
                    indices: [a, b, c],
                    value: d_val,
                });
            }
            let distinct = a < b && b < c;
            if distinct && f_val.abs() > TENSOR_DROP_TOL {
                f_entries.push(TensorEntry {
                    indices: [a, b, c],
                    value: f_val,
                });
            }
        }
    }
    f_entries.sort_by_key(|e| e.indices);
    d_entries.sort_by_key(|e| e.indices);

    StructureTensors {
        n: gens.dim(),
        f: AntisymmetricTensor {
            dim: m,
            entries: f_entries,
        },
        d: SymmetricTensor {
            dim: m,
            entries: d_entries,
        },
    }
}

/// Max residuals of the four defining identities of the basis.
#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub n: usize,
    /// `[L_a, L_b] - 2i sum_c f_abc L_c`
    pub commutator: f64,
    /// `{L_a, L_b} - (4/N) delta_ab I - 2 sum_c d_abc L_c`
    pub anticommutator: f64,
    /// `Tr(L_a L_b) - 2 delta_ab`
    pub trace_orthogonality: f64,
    /// `L_a L_b - (2/N) delta_ab I - sum_c (d_abc + i f_abc) L_c`
    pub product_expansion: f64,
}

impl ValidationReport {
    pub fn max_residual(&self) -> f64 {
        self.commutator
            .max(self.anticommutator)
            .max(self.trace_orthogonality)
            .max(self.product_expansion)
    }

    pub fn passes(&self) -> bool {
        self.max_residual() <= IDENTITY_TOL
    }
}

/// Check all four defining identities over every generator pair.
pub fn verify_algebra(gens: &GeneratorSet, tensors: &StructureTensors) -> Result<ValidationReport> {
    if gens.dim() != tensors.dim() {
        return Err(Error::DimensionMismatch {
            expected: gens.dim(),
            got: tensors.dim(),
        });
    }
    let n = gens.dim();
    let m = gens.count();
    let rows = par::map_range(ExecMode::auto(), m, |a| {
        let mut worst = [0.0_f64; 4];
        for b in 0..m {
            let la = gens.get(a);
            let lb = gens.get(b);
            let ab = la * lb;
            let ba = lb * la;

            let mut fsum = CMatrix::zeros(n, n);
            let mut dsum = CMatrix::zeros(n, n);
            for c in 0..m {
                let fv = tensors.f.get(a, b, c);
                if fv != 0.0 {
                    fsum += gens.get(c) * Complex64::new(fv, 0.0);
                }
                let dv = tensors.d.get(a, b, c);
                if dv != 0.0 {
                    dsum += gens.get(c) * Complex64::new(dv, 0.0);
                }
            }

            let comm = &ab - &ba - &fsum * Complex64::new(0.0, 2.0);
            worst[0] = worst[0].max(max_entry_abs(&comm));

            let mut anti = &ab + &ba - &dsum * Complex64::new(2.0, 0.0);
            let mut prod = ab.clone() - &dsum - &fsum * Complex64::new(0.0, 1.0);
            if a == b {
                let id = CMatrix::identity(n, n);
                anti -= &id * Complex64::new(4.0 / n as f64, 0.0);
                prod -= &id * Complex64::new(2.0 / n as f64, 0.0);
            }
            worst[1] = worst[1].max(max_entry_abs(&anti));
            worst[3] = worst[3].max(max_entry_abs(&prod));

            let kron = if a == b { 2.0 } else { 0.0 };
            let tr = ab.trace();
            worst[2] = worst[2].max((tr - Complex64::new(kron, 0.0)).norm());
        }
        worst
    });
    let mut acc = [0.0_f64; 4];
    for row in rows {
        for (slot, v) in acc.iter_mut().zip(row) {
            *slot = slot.max(v);
        }
    }
    Ok(ValidationReport {
        n,
        commutator: acc[0],
        anticommutator: acc[1],
        trace_orthogonality: acc[2],
        product_expansion: acc[3],
    })
}

/// A generator basis bundled with its tensors; the unit all geometric
/// operations borrow. Immutable once built, safe to share across threads.
#[derive(Debug, Clone)]
pub struct SunAlgebra {
    generators: GeneratorSet,
    tensors: StructureTensors,
}

static CACHE: OnceLock<Mutex<HashMap<usize, Arc<SunAlgebra>>>> = OnceLock::new();

impl SunAlgebra {
    /// Build from scratch, bypassing the cache.
    pub fn build(n: usize) -> Result<Self> {
        let generators = build_generators(n)?;
        let tensors = build_structure_tensors(&generators);
        Ok(Self {
            generators,
            tensors,
        })
    }

    /// Fetch from the process-wide memo, building on first use.
    pub fn cached(n: usize) -> Result<Arc<Self>> {
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(found) = cache.lock().unwrap().get(&n) {
            return Ok(found.clone());
        }
        // Built outside the lock; a racing builder just wins the insert.
        let built = Arc::new(Self::build(n)?);
        let mut guard = cache.lock().unwrap();
        Ok(guard.entry(n).or_insert(built).clone())
    }

    /// Like [`SunAlgebra::cached`], but backed by an on-disk tensor cache in
    /// `dir` so the tensors survive across processes.
    pub fn cached_with_disk(n: usize, dir: &Path) -> Result<Arc<Self>> {
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(found) = cache.lock().unwrap().get(&n) {
            return Ok(found.clone());
        }
        let built = Arc::new(match load_tensor_cache(n, dir)? {
            Some(tensors) => {
                let generators = build_generators(n)?;
                Self {
                    generators,
                    tensors,
                }
            }
            None => {
                let fresh = Self::build(n)?;
                store_tensor_cache(&fresh.tensors, dir)?;
                fresh
            }
        });
        let mut guard = cache.lock().unwrap();
        Ok(guard.entry(n).or_insert(built).clone())
    }

    pub fn n(&self) -> usize {
        self.generators.dim()
    }

    /// Generator count `N^2 - 1`.
    pub fn count(&self) -> usize {
        self.generators.count()
    }

    pub fn generators(&self) -> &GeneratorSet {
        &self.generators
    }

    pub fn tensors(&self) -> &StructureTensors {
        &self.tensors
    }

    pub fn generator(&self, a: usize) -> &CMatrix {
        self.generators.get(a)
    }
}

#[derive(Serialize, Deserialize)]
struct TensorCacheFile {
    format_version: String,
    n: usize,
    f: Vec<TensorEntry>,
    d: Vec<TensorEntry>,
}

fn cache_path(n: usize, dir: &Path) -> PathBuf {
    dir.join(format!("sun_tensors_n{n}_{ORDERING_VERSION}.json"))
}

fn load_tensor_cache(n: usize, dir: &Path) -> Result<Option<StructureTensors>> {
    let path = cache_path(n, dir);
    if !path.exists() {
        return Ok(None);
    }
    let text = std::fs::read_to_string(&path)?;
    let file: TensorCacheFile = serde_json::from_str(&text)
        .map_err(|e| Error::TensorCache(format!("{}: {e}", path.display())))?;
    if file.format_version != ORDERING_VERSION || file.n != n {
        return Err(Error::TensorCache(format!(
            "{}: version/dimension mismatch (found {} for N={}, expected {} for N={})",
            path.display(),
            file.format_version,
            file.n,
            ORDERING_VERSION,
            n
        )));
    }
    let m = n * n - 1;
    Ok(Some(StructureTensors {
        n,
        f: AntisymmetricTensor {
            dim: m,
            entries: file.f,
        },
        d: SymmetricTensor {
            dim: m,
            entries: file.d,
        },
    }))
}

fn store_tensor_cache(tensors: &StructureTensors, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let file = TensorCacheFile {
        format_version: ORDERING_VERSION.to_string(),
        n: tensors.dim(),
        f: tensors.f.entries().to_vec(),
        d: tensors.d.entries().to_vec(),
    };
    let path = cache_path(tensors.dim(), dir);
    std::fs::write(&path, serde_json::to_string(&file)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn rejects_dimension_below_two() {
        assert!(matches!(
            build_generators(1),
            Err(Error::DimensionTooSmall(1))
        ));
        assert!(matches!(
            build_generators(0),
            Err(Error::DimensionTooSmall(0))
        ));
    }

    #[test]
    fn n2_is_the_pauli_basis() {
        let gens = build_generators(2).unwrap();
        let sx = CMatrix::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]);
        let sy = CMatrix::from_row_slice(2, 2, &[c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)]);
        let sz = CMatrix::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)]);
        assert_eq!(gens.get(0), &sx);
        assert_eq!(gens.get(1), &sy);
        assert_eq!(gens.get(2), &sz);
    }

    #[test]
    fn n3_matches_gell_mann_ordering() {
        let gens = build_generators(3).unwrap();
        assert_eq!(gens.count(), 8);
        // slot 3 (0-based 2) is diag(1, -1, 0)
        let l3 = gens.get(2);
        assert_eq!(l3[(0, 0)], c(1., 0.));
        assert_eq!(l3[(1, 1)], c(-1., 0.));
        assert_eq!(l3[(2, 2)], c(0., 0.));
        // slot 8 is diag(1, 1, -2)/sqrt(3)
        let l8 = gens.get(7);
        let s = 1.0 / 3.0_f64.sqrt();
        assert!((l8[(0, 0)].re - s).abs() < 1e-15);
        assert!((l8[(1, 1)].re - s).abs() < 1e-15);
        assert!((l8[(2, 2)].re + 2.0 * s).abs() < 1e-15);
        // slot 5 is the (1,3) antisymmetric generator
        let l5 = gens.get(4);
        assert_eq!(l5[(0, 2)], c(0., -1.));
        assert_eq!(l5[(2, 0)], c(0., 1.));
    }

    #[test]
    fn generators_traceless_hermitian_orthonormal() {
        for n in 2..=6 {
            let gens = build_generators(n).unwrap();
            assert_eq!(gens.count(), n * n - 1);
            for a in 0..gens.count() {
                let la = gens.get(a);
                assert!(la.trace().norm() < 1e-12, "trace at N={n} a={a}");
                assert!(
                    crate::matrix::hermiticity_defect(la) < 1e-12,
                    "hermiticity at N={n} a={a}"
                );
                for b in 0..gens.count() {
                    let t = trace_product(la, gens.get(b));
                    let expect = if a == b { 2.0 } else { 0.0 };
                    assert!(
                        (t - c(expect, 0.)).norm() < 1e-12,
                        "orthogonality at N={n} ({a},{b})"
                    );
                }
            }
        }
    }

    #[test]
    fn su2_tensors_are_levi_civita_with_zero_d() {
        let gens = build_generators(2).unwrap();
        let t = build_structure_tensors(&gens);
        assert_eq!(t.d.nnz(), 0);
        assert!((t.f.get(0, 1, 2) - 1.0).abs() < 1e-14);
        assert!((t.f.get(1, 0, 2) + 1.0).abs() < 1e-14);
        assert!((t.f.get(2, 0, 1) - 1.0).abs() < 1e-14);
        assert_eq!(t.f.get(0, 0, 1), 0.0);
    }

    #[test]
    fn su3_constants_match_published_values() {
        // Published Gell-Mann table, 1-based indices.
        let expected_f: &[((usize, usize, usize), f64)] = &[
            ((1, 2, 3), 1.0),
            ((1, 4, 7), 0.5),
            ((2, 4, 6), 0.5),
            ((2, 5, 7), 0.5),
            ((3, 4, 5), 0.5),
            ((1, 5, 6), -0.5),
            ((3, 6, 7), -0.5),
            ((4, 5, 8), 3.0_f64.sqrt() / 2.0),
            ((6, 7, 8), 3.0_f64.sqrt() / 2.0),
        ];
        let gens = build_generators(3).unwrap();
        let t = build_structure_tensors(&gens);
        for &((a, b, c3), v) in expected_f {
            let got = t.f.get(a - 1, b - 1, c3 - 1);
            assert!((got - v).abs() < 1e-13, "f_{a}{b}{c3}: {got} vs {v}");
        }
        assert_eq!(t.f.nnz(), 9);
        let s3 = 1.0 / 3.0_f64.sqrt();
        assert!((t.d.get(0, 0, 7) - s3).abs() < 1e-13, "d_118");
        assert!((t.d.get(7, 7, 7) + s3).abs() < 1e-13, "d_888");
        assert!((t.d.get(0, 3, 5) - 0.5).abs() < 1e-13, "d_146");
    }

    #[test]
    fn tensor_symmetries_exhaustive_small_n() {
        for n in [2, 3, 4] {
            let gens = build_generators(n).unwrap();
            let t = build_structure_tensors(&gens);
            let m = gens.count();
            for a in 0..m {
                for b in 0..m {
                    assert_eq!(t.f.get(a, a, b), 0.0);
                    for c3 in 0..m {
                        let f0 = t.f.get(a, b, c3);
                        assert!((t.f.get(b, c3, a) - f0).abs() < 1e-15);
                        assert!((t.f.get(b, a, c3) + f0).abs() < 1e-15);
                        let d0 = t.d.get(a, b, c3);
                        assert!((t.d.get(b, a, c3) - d0).abs() < 1e-15);
                        assert!((t.d.get(c3, b, a) - d0).abs() < 1e-15);
                    }
                }
            }
        }
    }

    #[test]
    fn tensor_symmetries_sampled_n5() {
        let gens = build_generators(5).unwrap();
        let t = build_structure_tensors(&gens);
        // direct trace evaluation as the oracle on a sample of triples
        for &(a, b, c3) in &[(0, 5, 11), (3, 7, 20), (1, 2, 3), (10, 14, 23), (4, 4, 8)] {
            let prod = gens.get(b) * gens.get(c3);
            let tr = trace_product(gens.get(a), &prod);
            assert!((t.d.get(a, b, c3) - tr.re / 2.0).abs() < 1e-13);
            assert!((t.f.get(a, b, c3) - tr.im / 2.0).abs() < 1e-13);
        }
    }

    #[test]
    fn tensors_match_their_defining_traces() {
        // f_abc = -(i/4) Tr(L_a [L_b, L_c]), d_abc = (1/4) Tr(L_a {L_b, L_c})
        let gens = build_generators(4).unwrap();
        let t = build_structure_tensors(&gens);
        for &(a, b, c3) in &[(0, 1, 2), (2, 5, 9), (0, 0, 14), (7, 8, 12), (3, 11, 13)] {
            let bc = gens.get(b) * gens.get(c3);
            let cb = gens.get(c3) * gens.get(b);
            let comm = trace_product(gens.get(a), &(&bc - &cb));
            let anti = trace_product(gens.get(a), &(&bc + &cb));
            let f_def = (comm * Complex64::new(0.0, -0.25)).re;
            let d_def = anti.re / 4.0;
            assert!((t.f.get(a, b, c3) - f_def).abs() < 1e-13);
            assert!((t.d.get(a, b, c3) - d_def).abs() < 1e-13);
            assert!(comm.re.abs() < 1e-13);
            assert!(anti.im.abs() < 1e-13);
        }
    }

    #[test]
    fn verify_algebra_passes_n2_to_n5() {
        for n in [2, 3, 5] {
            let gens = build_generators(n).unwrap();
            let t = build_structure_tensors(&gens);
            let report = verify_algebra(&gens, &t).unwrap();
            assert!(report.passes(), "N={n}: {report:?}");
            if n == 2 {
                assert!(report.max_residual() < 1e-14);
            }
        }
    }

    #[test]
    fn verify_algebra_rejects_mismatched_inputs() {
        let g2 = build_generators(2).unwrap();
        let g3 = build_generators(3).unwrap();
        let t3 = build_structure_tensors(&g3);
        assert!(matches!(
            verify_algebra(&g2, &t3),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn sequential_and_parallel_tensor_builds_agree() {
        let gens = build_generators(4).unwrap();
        let seq = build_structure_tensors_mode(&gens, ExecMode::Sequential);
        let par = build_structure_tensors_mode(&gens, ExecMode::Parallel);
        assert_eq!(seq.f.entries(), par.f.entries());
        assert_eq!(seq.d.entries(), par.d.entries());
    }

    #[test]
    fn cache_returns_shared_instance() {
        let a = SunAlgebra::cached(3).unwrap();
        let b = SunAlgebra::cached(3).unwrap();
        assert!(Arc::ptr_eq(&a, &b));
    }

    #[test]
    fn disk_cache_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let fresh = SunAlgebra::build(4).unwrap();
        store_tensor_cache(fresh.tensors(), dir.path()).unwrap();
        let loaded = load_tensor_cache(4, dir.path()).unwrap().unwrap();
        assert_eq!(loaded.f.entries(), fresh.tensors().f.entries());
        assert_eq!(loaded.d.entries(), fresh.tensors().d.entries());
        assert!(load_tensor_cache(5, dir.path()).unwrap().is_none());
    }

    #[test]
    fn disk_cache_rejects_foreign_version() {
        let dir = tempfile::tempdir().unwrap();
        let path = cache_path(4, dir.path());
        std::fs::write(
            &path,
            r#"{"format_version":"other-v9","n":4,"f":[],"d":[]}"#,
        )
        .unwrap();
        assert!(matches!(
            load_tensor_cache(4, dir.path()),
            Err(Error::TensorCache(_))
        ));
    }
}
