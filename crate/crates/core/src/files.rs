//! File formats: group JSON, cover JSON, length-spectrum CSV, eigenvalue
//! JSON, and graph edge lists. All formats are text; every parser
//! validates the type invariants and reports line/field diagnostics.
//!
//! Matrix entries in group files are decimal strings so the full working
//! precision survives the trip through JSON (JSON numbers would clamp to
//! `f64`). Spectrum CSV uses Rust's shortest round-trip float formatting,
//! so `write(parse(x)) == x` bit-exactly.

use crate::fuchsian::{CoverSpec, GroupPresentation, LengthSpectrum, ConjClassRecord};
use crate::graphzeta::Graph;
use crate::numcore::{GroupElement, PrecComplex, PrecScalar};
use crate::scalar::Real;
use crate::spectral::SpectralData;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, thiserror::Error)]
pub enum FilesError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("schema error{}: {msg}", line.map(|l| format!(" (line {l})")).unwrap_or_default())]
    Schema { line: Option<usize>, msg: String },
}

fn schema(msg: impl Into<String>) -> FilesError {
    FilesError::Schema { line: None, msg: msg.into() }
}

fn schema_at(line: usize, msg: impl Into<String>) -> FilesError {
    FilesError::Schema { line: Some(line), msg: msg.into() }
}

// ---------------------------------------------------------------------------
// Group JSON

/// On-disk group schema. Each generator is four entries `[re, im]` in
/// row-major order, with `re`/`im` decimal strings.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct GroupFile {
    /// only "disk" (unit-disk model, SU(1,1) matrices) is supported
    pub model: String,
    pub genus: usize,
    pub generators: Vec<[[String; 2]; 4]>,
    pub relator: Vec<i32>,
}

impl GroupFile {
    pub fn to_presentation<T: Real>(&self) -> Result<GroupPresentation<T>, FilesError> {
        if self.model != "disk" {
            return Err(schema(format!("unsupported model '{}'", self.model)));
        }
        if self.generators.len() != 2 * self.genus {
            return Err(schema(format!(
                "genus {} needs {} generators, file has {}",
                self.genus,
                2 * self.genus,
                self.generators.len()
            )));
        }
        let mut generators = Vec::new();
        for (gi, mat) in self.generators.iter().enumerate() {
            let mut entries = [PrecComplex::zero(); 4];
            for (ei, [re, im]) in mat.iter().enumerate() {
                let parse = |s: &str, which: &str| {
                    T::from_decimal(s).map_err(|e| {
                        schema(format!(
                            "generator {gi} entry {ei} {which} part '{s}': {e}"
                        ))
                    })
                };
                entries[ei] = PrecComplex::new(
                    PrecScalar::rounded(parse(re, "real")?),
                    PrecScalar::rounded(parse(im, "imaginary")?),
                );
            }
            generators.push(GroupElement::from_entries(
                entries,
                Some(vec![gi as i32 + 1]),
            ));
        }
        for &l in &self.relator {
            if l == 0 || l.unsigned_abs() as usize > generators.len() {
                return Err(schema(format!("relator letter {l} out of range")));
            }
        }
        Ok(GroupPresentation { genus: self.genus, generators, relator: self.relator.clone() })
    }
}

pub fn read_group<T: Real>(path: &std::path::Path) -> Result<GroupPresentation<T>, FilesError> {
    let file: GroupFile = serde_json::from_str(&std::fs::read_to_string(path)?)?;
    file.to_presentation()
}

// ---------------------------------------------------------------------------
// Cover JSON

#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct CoverFile {
    pub degree: usize,
    pub images: Vec<Vec<usize>>,
}

impl From<CoverFile> for CoverSpec {
    fn from(f: CoverFile) -> Self {
        CoverSpec { degree: f.degree, images: f.images }
    }
}

pub fn read_cover(path: &std::path::Path) -> Result<CoverSpec, FilesError> {
    let file: CoverFile = serde_json::from_str(&std::fs::read_to_string(path)?)?;
    if file.degree == 0 {
        return Err(schema("cover degree must be >= 1"));
    }
    for (i, img) in file.images.iter().enumerate() {
        let mut seen = vec![false; file.degree];
        if img.len() != file.degree || !img.iter().all(|&x| x < file.degree) {
            return Err(schema(format!("image {i} is not a map on {} sheets", file.degree)));
        }
        for &x in img {
            if seen[x] {
                return Err(schema(format!("image {i} is not a permutation")));
            }
            seen[x] = true;
        }
    }
    Ok(file.into())
}

pub fn write_cover(path: &std::path::Path, cover: &CoverSpec) -> Result<(), FilesError> {
    let file = CoverFile { degree: cover.degree, images: cover.images.clone() };
    std::fs::write(path, serde_json::to_string_pretty(&file)? + "\n")?;
    Ok(())
}

// ---------------------------------------------------------------------------
// Length spectrum CSV

pub fn write_spectrum_string(spec: &LengthSpectrum) -> String {
    let mut s = String::new();
    s.push_str(&format!("# covolume = {}\n", spec.covolume));
    s.push_str(&format!("# cutoff = {}\n", spec.cutoff));
    s.push_str(&format!("# complete = {}\n", spec.complete));
    s.push_str(&format!("# tool_version = {TOOL_VERSION}\n"));
    s.push_str("ell0,m,ell,multiplicity,trace_abs\n");
    for r in &spec.records {
        s.push_str(&format!(
            "{},{},{},{},{}\n",
            r.ell0, r.m, r.ell, r.multiplicity, r.trace_abs
        ));
    }
    s
}

pub fn write_spectrum(path: &std::path::Path, spec: &LengthSpectrum) -> Result<(), FilesError> {
    std::fs::write(path, write_spectrum_string(spec))?;
    Ok(())
}

pub fn parse_spectrum(text: &str) -> Result<LengthSpectrum, FilesError> {
    let mut covolume: Option<f64> = None;
    let mut cutoff: Option<f64> = None;
    let mut complete: Option<bool> = None;
    let mut records = Vec::new();
    let mut header_seen = false;
    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            if let Some((key, val)) = rest.split_once('=') {
                let (key, val) = (key.trim(), val.trim());
                match key {
                    "covolume" => {
                        covolume = Some(val.parse().map_err(|_| {
                            schema_at(lineno, format!("bad covolume '{val}'"))
                        })?)
                    }
                    "cutoff" => {
                        cutoff = Some(val.parse().map_err(|_| {
                            schema_at(lineno, format!("bad cutoff '{val}'"))
                        })?)
                    }
                    "complete" => {
                        complete = Some(val.parse().map_err(|_| {
                            schema_at(lineno, format!("bad complete flag '{val}'"))
                        })?)
                    }
                    _ => {} // tool_version and future keys: informational
                }
            }
            continue;
        }
        if !header_seen {
            if line != "ell0,m,ell,multiplicity,trace_abs" {
                return Err(schema_at(lineno, format!("unexpected header '{line}'")));
            }
            header_seen = true;
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 5 {
            return Err(schema_at(lineno, format!("expected 5 fields, got {}", fields.len())));
        }
        let f = |j: usize, name: &str| -> Result<f64, FilesError> {
            fields[j]
                .parse()
                .map_err(|_| schema_at(lineno, format!("bad {name} '{}'", fields[j])))
        };
        records.push(ConjClassRecord {
            ell0: f(0, "ell0")?,
            m: fields[1]
                .parse()
                .map_err(|_| schema_at(lineno, format!("bad m '{}'", fields[1])))?,
            ell: f(2, "ell")?,
            multiplicity: fields[3]
                .parse()
                .map_err(|_| schema_at(lineno, format!("bad multiplicity '{}'", fields[3])))?,
            trace_abs: f(4, "trace_abs")?,
        });
    }
    let spec = LengthSpectrum {
        cutoff: cutoff.ok_or_else(|| schema("missing '# cutoff =' header"))?,
        covolume: covolume.ok_or_else(|| schema("missing '# covolume =' header"))?,
        complete: complete.ok_or_else(|| schema("missing '# complete =' header"))?,
        records,
    };
    if spec.records.windows(2).any(|w| w[0].ell > w[1].ell) {
        return Err(schema("records must be sorted by ell"));
    }
    Ok(spec)
}

pub fn read_spectrum(path: &std::path::Path) -> Result<LengthSpectrum, FilesError> {
    parse_spectrum(&std::fs::read_to_string(path)?)
}

// ---------------------------------------------------------------------------
// Eigenvalue JSON

pub fn read_eigen(path: &std::path::Path) -> Result<SpectralData, FilesError> {
    let data: SpectralData = serde_json::from_str(&std::fs::read_to_string(path)?)?;
    data.validate().map_err(|e| schema(e.to_string()))?;
    Ok(data)
}

pub fn write_eigen(path: &std::path::Path, data: &SpectralData) -> Result<(), FilesError> {
    std::fs::write(path, serde_json::to_string_pretty(data)? + "\n")?;
    Ok(())
}

// ---------------------------------------------------------------------------
// Graph edge list

pub fn parse_graph(text: &str) -> Result<Graph, FilesError> {
    let mut edges = Vec::new();
    let mut max_v = 0usize;
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut it = line.split_whitespace();
        let mut next = |name: &str| -> Result<usize, FilesError> {
            it.next()
                .ok_or_else(|| schema_at(i + 1, format!("missing {name}")))?
                .parse()
                .map_err(|_| schema_at(i + 1, format!("bad {name}")))
        };
        let u = next("source vertex")?;
        let v = next("target vertex")?;
        if it.next().is_some() {
            return Err(schema_at(i + 1, "trailing tokens after edge".to_string()));
        }
        max_v = max_v.max(u).max(v);
        edges.push((u, v));
    }
    if edges.is_empty() {
        return Err(schema("empty graph file"));
    }
    Graph::new(max_v + 1, edges).map_err(|e| schema(e.to_string()))
}

pub fn read_graph(path: &std::path::Path) -> Result<Graph, FilesError> {
    parse_graph(&std::fs::read_to_string(path)?)
}

pub fn write_graph(path: &std::path::Path, g: &Graph) -> Result<(), FilesError> {
    let mut s = String::new();
    for &(u, v) in g.edges() {
        s.push_str(&format!("{u} {v}\n"));
    }
    std::fs::write(path, s)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fuchsian::octagon_group;
    use crate::scalar::DoubleDouble;

    #[test]
    fn spectrum_csv_bit_exact_round_trip() {
        let spec = LengthSpectrum {
            cutoff: 6.0,
            covolume: 4.0 * std::f64::consts::PI,
            complete: true,
            records: vec![
                ConjClassRecord {
                    ell0: 0.1 + 0.2, // deliberately non-representable nicely
                    m: 2,
                    ell: 2.0 * (0.1 + 0.2),
                    multiplicity: 7,
                    trace_abs: 2.13,
                },
                ConjClassRecord {
                    ell0: 3.0571418389619964,
                    m: 1,
                    ell: 3.0571418389619964,
                    multiplicity: 24,
                    trace_abs: 4.82842712474619,
                },
            ],
        };
        let text = write_spectrum_string(&spec);
        let back = parse_spectrum(&text).unwrap();
        assert_eq!(back.cutoff.to_bits(), spec.cutoff.to_bits());
        assert_eq!(back.covolume.to_bits(), spec.covolume.to_bits());
        assert_eq!(back.complete, spec.complete);
        assert_eq!(back.records.len(), spec.records.len());
        for (a, b) in back.records.iter().zip(&spec.records) {
            assert_eq!(a.ell0.to_bits(), b.ell0.to_bits());
            assert_eq!(a.ell.to_bits(), b.ell.to_bits());
            assert_eq!(a.trace_abs.to_bits(), b.trace_abs.to_bits());
            assert_eq!((a.m, a.multiplicity), (b.m, b.multiplicity));
        }
        // and the re-serialization is textually identical
        assert_eq!(write_spectrum_string(&back), text);
    }

    #[test]
    fn spectrum_csv_diagnostics() {
        let bad = "# covolume = 1\n# cutoff = x\n# complete = true\nell0,m,ell,multiplicity,trace_abs\n";
        let err = parse_spectrum(bad).unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
        let bad2 = "# covolume = 1\n# cutoff = 5\n# complete = true\nell0,m,ell,multiplicity,trace_abs\n1.0,1,1.0,abc,2.0\n";
        let err2 = parse_spectrum(bad2).unwrap_err();
        assert!(err2.to_string().contains("multiplicity"), "{err2}");
        let missing = "ell0,m,ell,multiplicity,trace_abs\n";
        assert!(parse_spectrum(missing).is_err());
    }

    #[test]
    fn group_json_matches_builtin() {
        // 40-digit decimals for 1 + sqrt2 and sqrt(2 + 2 sqrt2) and its
        // sqrt2/2 multiples
        let a = "2.414213562373095048801688724209698078570";
        let r = "2.197368226935619932079602390481356757089";
        let rs = "1.553773974030037307344158953063146948165";
        let z = "0";
        let gens = vec![
            [[a, z], [r, z], [r, z], [a, z]],
            [[a, z], [rs, rs], [rs, "-1.553773974030037307344158953063146948165"], [a, z]],
            [[a, z], [z, r], [z, "-2.197368226935619932079602390481356757089"], [a, z]],
            [[a, z], ["-1.553773974030037307344158953063146948165", rs], ["-1.553773974030037307344158953063146948165", "-1.553773974030037307344158953063146948165"], [a, z]],
        ];
        let file = GroupFile {
            model: "disk".into(),
            genus: 2,
            generators: gens
                .into_iter()
                .map(|m| m.map(|[re, im]: [&str; 2]| [re.to_string(), im.to_string()]))
                .collect(),
            relator: vec![1, -2, 3, -4, -1, 2, -3, 4],
        };
        let parsed: GroupPresentation<DoubleDouble> = file.to_presentation().unwrap();
        let builtin = octagon_group::<DoubleDouble>();
        for (p, b) in parsed.generators.iter().zip(&builtin.generators) {
            assert!(p.entry_dist(b).to_f64() < 1e-30, "{:?}", p.entry_dist(b).to_f64());
        }
        crate::fuchsian::validate_group(&parsed).unwrap();
        // wrong model / relator letter / generator count rejected
        let mut bad = file_clone(&file);
        bad.model = "halfplane".into();
        assert!(bad.to_presentation::<f64>().is_err());
        let mut bad2 = file_clone(&file);
        bad2.relator = vec![5];
        assert!(bad2.to_presentation::<f64>().is_err());
        let mut bad3 = file_clone(&file);
        bad3.generators.pop();
        assert!(bad3.to_presentation::<f64>().is_err());
    }

    fn file_clone(f: &GroupFile) -> GroupFile {
        GroupFile {
            model: f.model.clone(),
            genus: f.genus,
            generators: f.generators.clone(),
            relator: f.relator.clone(),
        }
    }

    #[test]
    fn graph_edge_list_round_trip() {
        let g = parse_graph("# a comment\n0 1\n1 2\n2 0\n").unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.m(), 3);
        assert!(parse_graph("0 0\n").is_err());
        assert!(parse_graph("0 1 2\n").is_err());
        assert!(parse_graph("0 x\n").is_err());
        assert!(parse_graph("").is_err());
    }

    #[test]
    fn eigen_json_schema() {
        let text = r#"{ "vol": 12.56, "lambdas": [0.0, 3.8], "source": "test" }"#;
        let d: SpectralData = serde_json::from_str(text).unwrap();
        d.validate().unwrap();
        let bad = r#"{ "vol": 12.56, "lambdas": [0.5], "source": "test" }"#;
        let d2: SpectralData = serde_json::from_str(bad).unwrap();
        assert!(d2.validate().is_err());
    }

    #[test]
    fn cover_json_validation() {
        let dir = std::env::temp_dir().join("bszeta-files-test");
        std::fs::create_dir_all(&dir).unwrap();
        let p = dir.join("cover.json");
        let cov = CoverSpec {
            degree: 2,
            images: vec![vec![1, 0], vec![0, 1], vec![0, 1], vec![0, 1]],
        };
        write_cover(&p, &cov).unwrap();
        let back = read_cover(&p).unwrap();
        assert_eq!(back.degree, 2);
        assert_eq!(back.images, cov.images);
        std::fs::write(&p, r#"{ "degree": 2, "images": [[0, 0]] }"#).unwrap();
        assert!(read_cover(&p).is_err());
    }
}
