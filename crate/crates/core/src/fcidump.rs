//! FCIDUMP ingestion.
//!
//! Header keys NORB, NELEC and MS2 are required; ORBSYM, ISYM and anything
//! else in the namelist is read and discarded. Data lines are
//! `value i j k l` with 1-based orbital indices:
//!
//! | indices         | meaning                       |
//! |-----------------|-------------------------------|
//! | `i j k l` > 0   | two-electron `(ij|kl)`        |
//! | `i j 0 0`       | one-electron `h_ij`           |
//! | `0 0 0 0`       | core energy                   |
//! | `i 0 0 0`       | orbital energy (ignored)      |

use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum FcidumpError {
    #[error("line {line}: malformed header: {msg}")]
    Header { line: usize, msg: String },

    #[error("line {line}: malformed data line: {msg}")]
    Data { line: usize, msg: String },

    #[error("line {line}: orbital index {index} outside [0, {norb}]")]
    IndexOutOfRange { line: usize, index: i64, norb: usize },

    #[error("line {line}: entry {indices:?} = {value} conflicts with earlier value {previous}")]
    Conflict {
        line: usize,
        indices: [usize; 4],
        value: f64,
        previous: f64,
    },

    #[error("invalid integrals: {0}")]
    Invalid(String),
}

/// Spatial-orbital integrals in Hartree, two-electron part in chemists' notation.
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitalIntegrals {
    n_spatial: usize,
    n_electrons: usize,
    ms2: i32,
    h: Vec<f64>,
    v_chem: Vec<f64>,
    e_core: f64,
}

const SYMMETRY_TOL: f64 = 1e-12;
const CONFLICT_TOL: f64 = 1e-10;

impl OrbitalIntegrals {
    /// All-zero integrals for the given sizes.
    pub fn zeros(n_spatial: usize, n_electrons: usize, ms2: i32) -> Result<Self, FcidumpError> {
        if n_electrons > 2 * n_spatial {
            return Err(FcidumpError::Invalid(format!(
                "{n_electrons} electrons do not fit in {n_spatial} spatial orbitals"
            )));
        }
        Ok(OrbitalIntegrals {
            n_spatial,
            n_electrons,
            ms2,
            h: vec![0.0; n_spatial * n_spatial],
            v_chem: vec![0.0; n_spatial.pow(4)],
            e_core: 0.0,
        })
    }

    pub fn n_spatial(&self) -> usize {
        self.n_spatial
    }

    pub fn n_electrons(&self) -> usize {
        self.n_electrons
    }

    pub fn ms2(&self) -> i32 {
        self.ms2
    }

    pub fn e_core(&self) -> f64 {
        self.e_core
    }

    pub fn set_e_core(&mut self, e: f64) {
        self.e_core = e;
    }

    #[inline]
    pub fn h(&self, p: usize, q: usize) -> f64 {
        self.h[p * self.n_spatial + q]
    }

    /// Chemists' `(pq|rs)`.
    #[inline]
    pub fn v_chem(&self, p: usize, q: usize, r: usize, s: usize) -> f64 {
        let n = self.n_spatial;
        self.v_chem[((p * n + q) * n + r) * n + s]
    }

    /// Sets `h_pq` and `h_qp`.
    pub fn set_one_body(&mut self, p: usize, q: usize, value: f64) {
        let n = self.n_spatial;
        self.h[p * n + q] = value;
        self.h[q * n + p] = value;
    }

    /// Sets all eight permutations of `(pq|rs)`.
    pub fn set_two_body(&mut self, p: usize, q: usize, r: usize, s: usize, value: f64) {
        let n = self.n_spatial;
        for [a, b, c, d] in eightfold(p, q, r, s) {
            self.v_chem[((a * n + b) * n + c) * n + d] = value;
        }
    }

    /// Checks the symmetry invariants of `h` and `(pq|rs)`.
    pub fn validate(&self) -> Result<(), FcidumpError> {
        let n = self.n_spatial;
        for p in 0..n {
            for q in 0..n {
                if (self.h(p, q) - self.h(q, p)).abs() > SYMMETRY_TOL {
                    return Err(FcidumpError::Invalid(format!("h not symmetric at ({p},{q})")));
                }
                for r in 0..n {
                    for s in 0..n {
                        let v = self.v_chem(p, q, r, s);
                        for [a, b, c, d] in eightfold(p, q, r, s) {
                            if (self.v_chem(a, b, c, d) - v).abs() > SYMMETRY_TOL {
                                return Err(FcidumpError::Invalid(format!(
                                    "(pq|rs) breaks 8-fold symmetry at ({p}{q}|{r}{s})"
                                )));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Serialises in FCIDUMP form, one line per symmetry-unique entry.
    pub fn to_fcidump(&self) -> String {
        let n = self.n_spatial;
        let mut out = format!(
            " &FCI NORB={n},NELEC={},MS2={},\n  ORBSYM={}\n  ISYM=1,\n &END\n",
            self.n_electrons,
            self.ms2,
            "1,".repeat(n)
        );
        for p in 0..n {
            for q in 0..=p {
                for r in 0..n {
                    for s in 0..=r {
                        if p * n + q < r * n + s {
                            continue;
                        }
                        let v = self.v_chem(p, q, r, s);
                        if v != 0.0 {
                            let _ = writeln!(out, "{v:.17e} {} {} {} {}", p + 1, q + 1, r + 1, s + 1);
                        }
                    }
                }
            }
        }
        for p in 0..n {
            for q in 0..=p {
                let v = self.h(p, q);
                if v != 0.0 {
                    let _ = writeln!(out, "{v:.17e} {} {} 0 0", p + 1, q + 1);
                }
            }
        }
        let _ = writeln!(out, "{:.17e} 0 0 0 0", self.e_core);
        out
    }
}

fn eightfold(p: usize, q: usize, r: usize, s: usize) -> [[usize; 4]; 8] {
    [
        [p, q, r, s],
        [q, p, r, s],
        [p, q, s, r],
        [q, p, s, r],
        [r, s, p, q],
        [s, r, p, q],
        [r, s, q, p],
        [s, r, q, p],
    ]
}

fn canonical(p: usize, q: usize, r: usize, s: usize) -> [usize; 4] {
    let (p, q) = (p.max(q), p.min(q));
    let (r, s) = (r.max(s), r.min(s));
    if (p, q) >= (r, s) {
        [p, q, r, s]
    } else {
        [r, s, p, q]
    }
}

#[derive(Default)]
struct Header {
    norb: Option<usize>,
    nelec: Option<usize>,
    ms2: Option<i32>,
}

fn parse_header_chunk(text: &str, line: usize, header: &mut Header) -> Result<(), FcidumpError> {
    let err = |msg: String| FcidumpError::Header { line, msg };
    for item in text.split(',') {
        let item = item.trim();
        if item.is_empty() {
            continue;
        }
        let Some((key, value)) = item.split_once('=') else {
            // continuation of a list value such as ORBSYM
            continue;
        };
        let key = key.trim().to_ascii_uppercase();
        let value = value.trim();
        match key.as_str() {
            "NORB" => {
                header.norb = Some(value.parse().map_err(|_| err(format!("bad NORB {value:?}")))?)
            }
            "NELEC" => {
                header.nelec = Some(value.parse().map_err(|_| err(format!("bad NELEC {value:?}")))?)
            }
            "MS2" => header.ms2 = Some(value.parse().map_err(|_| err(format!("bad MS2 {value:?}")))?),
            _ => {}
        }
    }
    Ok(())
}

fn parse_value(tok: &str) -> Option<f64> {
    tok.replace(['D', 'd'], "E").parse().ok().filter(|v: &f64| v.is_finite())
}

pub fn parse_fcidump(text: &str) -> Result<OrbitalIntegrals, FcidumpError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let mut header = Header::default();
    let mut saw_start = false;
    let mut header_end = None;

    for (no, raw) in lines.by_ref() {
        let mut l = raw.trim();
        if l.is_empty() {
            continue;
        }
        if !saw_start {
            let upper = l.to_ascii_uppercase();
            if !upper.starts_with("&FCI") {
                return Err(FcidumpError::Header {
                    line: no,
                    msg: "expected '&FCI' namelist".into(),
                });
            }
            saw_start = true;
            l = &l[4..];
        }
        let upper = l.to_ascii_uppercase();
        let (body, done) = if let Some(i) = upper.find("&END") {
            (&l[..i], true)
        } else if let Some(i) = l.find('/') {
            (&l[..i], true)
        } else {
            (l, false)
        };
        parse_header_chunk(body, no, &mut header)?;
        if done {
            header_end = Some(no);
            break;
        }
    }
    let end_line = header_end.ok_or_else(|| FcidumpError::Header {
        line: text.lines().count().max(1),
        msg: "header not terminated by '&END' or '/'".into(),
    })?;
    let missing = |k: &str| FcidumpError::Header {
        line: end_line,
        msg: format!("missing {k}"),
    };
    let norb = header.norb.ok_or_else(|| missing("NORB"))?;
    let nelec = header.nelec.ok_or_else(|| missing("NELEC"))?;
    let ms2 = header.ms2.ok_or_else(|| missing("MS2"))?;
    let mut ints = OrbitalIntegrals::zeros(norb, nelec, ms2)?;

    let mut seen: HashMap<[usize; 4], f64> = HashMap::new();
    for (no, raw) in lines {
        let toks: Vec<&str> = raw.split_whitespace().collect();
        if toks.is_empty() {
            continue;
        }
        if toks.len() != 5 {
            return Err(FcidumpError::Data {
                line: no,
                msg: format!("expected 5 fields, found {}", toks.len()),
            });
        }
        let value = parse_value(toks[0]).ok_or_else(|| FcidumpError::Data {
            line: no,
            msg: format!("bad value {:?}", toks[0]),
        })?;
        let mut idx = [0usize; 4];
        for (slot, tok) in idx.iter_mut().zip(&toks[1..]) {
            let i: i64 = tok.parse().map_err(|_| FcidumpError::Data {
                line: no,
                msg: format!("bad index {tok:?}"),
            })?;
            if i < 0 || i as usize > norb {
                return Err(FcidumpError::IndexOutOfRange {
                    line: no,
                    index: i,
                    norb,
                });
            }
            *slot = i as usize;
        }
        let [i, j, k, l] = idx;
        let key = match (i > 0, j > 0, k > 0, l > 0) {
            (true, true, true, true) => canonical(i - 1, j - 1, k - 1, l - 1),
            // one-body entries are keyed with an out-of-band marker
            (true, true, false, false) => [i.max(j) - 1, i.min(j) - 1, usize::MAX, usize::MAX],
            (false, false, false, false) => [usize::MAX; 4],
            (true, false, false, false) => continue,
            _ => {
                return Err(FcidumpError::Data {
                    line: no,
                    msg: format!("unsupported index pattern {i} {j} {k} {l}"),
                })
            }
        };
        if let Some(&prev) = seen.get(&key) {
            if (prev - value).abs() > CONFLICT_TOL {
                return Err(FcidumpError::Conflict {
                    line: no,
                    indices: idx,
                    value,
                    previous: prev,
                });
            }
            continue;
        }
        seen.insert(key, value);
        match key {
            [usize::MAX, ..] => ints.e_core = value,
            [p, q, usize::MAX, _] => ints.set_one_body(p, q, value),
            [p, q, r, s] => ints.set_two_body(p, q, r, s, value),
        }
    }
    Ok(ints)
}
