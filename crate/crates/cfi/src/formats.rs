//! On-disk formats: pool descriptors and GSE profiles (JSON), challenge
//! lists (CSV), response dumps (0/1 text), helper blobs and sketches
//! (binary).

use std::io::{BufRead, Read, Write};

use cfi_core::gse::{EditType, GseChallenge, GseProfile};
use cfi_core::ordna::{Layout, OrdnaConfig, Seq, Sketch};
use cfi_core::HelperData;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

/// JSON description of an orDNA pool; the pool is a pure function of it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PoolDescriptor {
    pub scheme: String,
    pub seed: u64,
    pub pool_size: u64,
    pub stages: u32,
    /// `l13` or `l19`.
    pub layout: String,
}

impl From<OrdnaConfig> for PoolDescriptor {
    fn from(c: OrdnaConfig) -> Self {
        let layout = match c.layout {
            Layout::L13 => "l13",
            Layout::L19 => "l19",
        };
        Self {
            scheme: "ordna".into(),
            seed: c.seed,
            pool_size: c.pool_size,
            stages: c.stages,
            layout: layout.into(),
        }
    }
}

impl PoolDescriptor {
    pub fn to_config(&self) -> Result<OrdnaConfig> {
        if self.scheme != "ordna" {
            return Err(CliError::format(
                "pool descriptor",
                format!("scheme {:?} is not ordna", self.scheme),
            ));
        }
        let layout = match self.layout.as_str() {
            "l13" => Layout::L13,
            "l19" => Layout::L19,
            other => {
                return Err(CliError::format(
                    "pool descriptor",
                    format!("unknown layout {other:?}"),
                ))
            }
        };
        Ok(OrdnaConfig {
            seed: self.seed,
            pool_size: self.pool_size,
            stages: self.stages,
            layout,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SiteRecord {
    pub coord: u32,
    /// `abe` or `cbe`; must agree with the reference base.
    pub edit: String,
    pub edited: bool,
}

/// JSON form of a GSE profile.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GseProfileFile {
    pub scheme: String,
    pub genome_length: u32,
    pub p_edit: f64,
    pub seed: u64,
    pub sites: Vec<SiteRecord>,
}

fn edit_id(e: EditType) -> &'static str {
    match e {
        EditType::Abe => "abe",
        EditType::Cbe => "cbe",
    }
}

impl From<&GseProfile> for GseProfileFile {
    fn from(p: &GseProfile) -> Self {
        Self {
            scheme: "gse".into(),
            genome_length: p.genome_length(),
            p_edit: p.p_edit(),
            seed: p.seed(),
            sites: p
                .sites()
                .iter()
                .map(|s| SiteRecord {
                    coord: s.coord,
                    edit: edit_id(s.edit).into(),
                    edited: s.bit,
                })
                .collect(),
        }
    }
}

impl GseProfileFile {
    pub fn to_profile(&self) -> Result<GseProfile> {
        if self.scheme != "gse" {
            return Err(CliError::format(
                "GSE profile",
                format!("scheme {:?} is not gse", self.scheme),
            ));
        }
        let coords: Vec<u32> = self.sites.iter().map(|s| s.coord).collect();
        let bits: Vec<bool> = self.sites.iter().map(|s| s.edited).collect();
        let profile =
            GseProfile::from_sites(self.genome_length, &coords, &bits, self.p_edit, self.seed)
                .map_err(|e| CliError::format("GSE profile", e))?;
        for (rec, site) in self.sites.iter().zip(profile.sites()) {
            if rec.edit != edit_id(site.edit) {
                return Err(CliError::format(
                    "GSE profile",
                    format!(
                        "site {} is {:?} but its reference base calls for {}",
                        rec.coord,
                        rec.edit,
                        edit_id(site.edit)
                    ),
                ));
            }
        }
        Ok(profile)
    }
}

/// Text form of a challenge inside a CSV cell.
pub trait ChallengeText: Sized {
    fn to_text(&self) -> String;
    fn from_text(s: &str) -> Result<Self>;
}

impl ChallengeText for u8 {
    fn to_text(&self) -> String {
        self.to_string()
    }

    fn from_text(s: &str) -> Result<Self> {
        s.trim()
            .parse()
            .map_err(|e| CliError::format("wavelength", format!("{s:?}: {e}")))
    }
}

impl ChallengeText for Seq {
    fn to_text(&self) -> String {
        self.to_string()
    }

    fn from_text(s: &str) -> Result<Self> {
        s.trim()
            .parse()
            .map_err(|e| CliError::format("sequence", format!("{s:?}: {e}")))
    }
}

/// Coordinates separated by `;`.
impl ChallengeText for GseChallenge {
    fn to_text(&self) -> String {
        self.coords()
            .iter()
            .map(u32::to_string)
            .collect::<Vec<_>>()
            .join(";")
    }

    fn from_text(s: &str) -> Result<Self> {
        let coords = s
            .split(';')
            .map(|c| {
                c.trim()
                    .parse::<u32>()
                    .map_err(|e| CliError::format("coordinate list", format!("{c:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        GseChallenge::new(coords).map_err(|e| CliError::format("coordinate list", e))
    }
}

#[derive(Serialize, Deserialize)]
struct ChallengeRow {
    index: usize,
    challenge: String,
}

/// CSV with header `index,challenge`.
pub fn write_challenges<W: Write, C: ChallengeText>(w: W, challenges: &[C]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for (index, x) in challenges.iter().enumerate() {
        out.serialize(ChallengeRow {
            index,
            challenge: x.to_text(),
        })
        .map_err(|e| CliError::format("challenge CSV", e))?;
    }
    out.flush()
        .map_err(|e| CliError::format("challenge CSV", e))
}

/// Rows must be numbered `0, 1, …` in order.
pub fn read_challenges<R: Read, C: ChallengeText>(r: R) -> Result<Vec<C>> {
    let mut input = csv::Reader::from_reader(r);
    let mut out = Vec::new();
    for (i, row) in input.deserialize::<ChallengeRow>().enumerate() {
        let row = row.map_err(|e| CliError::format("challenge CSV", e))?;
        if row.index != i {
            return Err(CliError::format(
                "challenge CSV",
                format!("row {i} carries index {}", row.index),
            ));
        }
        out.push(C::from_text(&row.challenge)?);
    }
    Ok(out)
}

/// One response per line as `0`/`1` characters.
pub fn write_bit_responses<W: Write>(mut w: W, responses: &[Vec<u8>]) -> Result<()> {
    let io = |e| CliError::io("<response dump>", e);
    for y in responses {
        let line: String = y
            .iter()
            .map(|&b| if b & 1 == 1 { '1' } else { '0' })
            .collect();
        writeln!(w, "{line}").map_err(io)?;
    }
    Ok(())
}

pub fn read_bit_responses<R: BufRead>(r: R) -> Result<Vec<Vec<u8>>> {
    let mut out = Vec::new();
    for (n, line) in r.lines().enumerate() {
        let line = line.map_err(|e| CliError::io("<response dump>", e))?;
        let bits = line
            .trim_end()
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(CliError::format(
                    "response dump",
                    format!("line {}: {other:?}", n + 1),
                )),
            })
            .collect::<Result<Vec<u8>>>()?;
        out.push(bits);
    }
    Ok(out)
}

const HELPER_MAGIC: &[u8; 4] = b"CFIH";
const SKETCH_MAGIC: &[u8; 4] = b"CFIS";

/// `CFIH`, payload length (u32 LE), then the tagged helper bytes.
pub fn encode_helper(h: &HelperData) -> Vec<u8> {
    let body = h.to_bytes();
    let mut out = Vec::with_capacity(8 + body.len());
    out.extend_from_slice(HELPER_MAGIC);
    out.extend_from_slice(&(body.len() as u32).to_le_bytes());
    out.extend_from_slice(&body);
    out
}

pub fn decode_helper(bytes: &[u8]) -> Result<HelperData> {
    let body = framed(bytes, HELPER_MAGIC, "helper blob")?;
    HelperData::from_bytes(body).map_err(|e| CliError::format("helper blob", e))
}

fn framed<'a>(bytes: &'a [u8], magic: &[u8; 4], what: &'static str) -> Result<&'a [u8]> {
    if bytes.len() < 8 || &bytes[..4] != magic {
        return Err(CliError::format(what, "missing magic header"));
    }
    let len = u32::from_le_bytes([bytes[4], bytes[5], bytes[6], bytes[7]]) as usize;
    let body = &bytes[8..];
    if body.len() != len {
        return Err(CliError::format(
            what,
            format!("header says {len} bytes, found {}", body.len()),
        ));
    }
    Ok(body)
}

/// `CFIS`, byte length (u32 LE), run count (u16 LE), then the run-major
/// digests.
pub fn encode_sketch(s: &Sketch) -> Vec<u8> {
    let mut out = Vec::with_capacity(10 + s.as_bytes().len());
    out.extend_from_slice(SKETCH_MAGIC);
    out.extend_from_slice(&((s.as_bytes().len() + 2) as u32).to_le_bytes());
    out.extend_from_slice(&(s.runs() as u16).to_le_bytes());
    out.extend_from_slice(s.as_bytes());
    out
}

pub fn decode_sketch(bytes: &[u8]) -> Result<Sketch> {
    let body = framed(bytes, SKETCH_MAGIC, "sketch")?;
    if body.len() < 2 {
        return Err(CliError::format("sketch", "missing run count"));
    }
    let runs = u16::from_le_bytes([body[0], body[1]]) as usize;
    Sketch::from_runs(runs, body[2..].to_vec()).map_err(|e| CliError::format("sketch", e))
}
