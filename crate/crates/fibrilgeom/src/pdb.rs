//! Fixed-column PDB parsing into a structure hierarchy.
//!
//! Only `ATOM` records of the first model are retained; `HETATM` is ignored.
//! Alternate locations are resolved by highest occupancy (ties go to the
//! lexicographically smallest altLoc). Column layout follows the PDB v3.3
//! ATOM record: serial 7-11, name 13-16, altLoc 17, resName 18-20, chainID 22,
//! resSeq 23-26, iCode 27, x/y/z 31-54, occupancy 55-60, element 77-78.

use crate::Vec3;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PdbError {
    #[error("line {line}: malformed {field} field")]
    MalformedRecord { line: usize, field: &'static str },
    #[error("no ATOM records found")]
    EmptyStructure,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Atom {
    pub serial: i64,
    pub name: String,
    pub alt_loc: Option<char>,
    pub residue_seq: i32,
    pub insertion_code: Option<char>,
    pub chain_id: char,
    pub position: Vec3,
    pub element: String,
    pub occupancy: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Residue {
    pub seq: i32,
    pub insertion_code: Option<char>,
    pub name: String,
    pub atoms: Vec<Atom>,
}

impl Residue {
    /// First atom with the given name, after altLoc resolution.
    pub fn atom(&self, name: &str) -> Option<&Atom> {
        self.atoms.iter().find(|a| a.name == name)
    }

    /// Whether the residue has the full N, CA, C, O backbone.
    pub fn backbone_complete(&self) -> bool {
        ["N", "CA", "C", "O"].iter().all(|n| self.atom(n).is_some())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Chain {
    pub id: char,
    pub residues: Vec<Residue>,
}

impl Chain {
    pub fn residue(&self, seq: i32) -> Option<&Residue> {
        self.residues.iter().find(|r| r.seq == seq)
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Structure {
    pub id: String,
    pub chains: Vec<Chain>,
}

impl Structure {
    pub fn chain(&self, id: char) -> Option<&Chain> {
        self.chains.iter().find(|c| c.id == id)
    }

    pub fn atom_count(&self) -> usize {
        self.chains
            .iter()
            .flat_map(|c| &c.residues)
            .map(|r| r.atoms.len())
            .sum()
    }
}

fn slice(line: &str, start: usize, end: usize) -> &str {
    let bytes = line.as_bytes();
    let end = end.min(bytes.len());
    if start >= end {
        return "";
    }
    std::str::from_utf8(&bytes[start..end]).unwrap_or("")
}

fn char_at(line: &str, idx: usize) -> Option<char> {
    line.as_bytes()
        .get(idx)
        .map(|&b| b as char)
        .filter(|c| *c != ' ')
}

fn parse_f64(
    line: &str,
    lineno: usize,
    start: usize,
    end: usize,
    field: &'static str,
) -> Result<f64, PdbError> {
    let text = slice(line, start, end).trim();
    let value: f64 = text.parse().map_err(|_| PdbError::MalformedRecord {
        line: lineno,
        field,
    })?;
    if !value.is_finite() {
        return Err(PdbError::MalformedRecord {
            line: lineno,
            field,
        });
    }
    Ok(value)
}

// Keyed by (chain order, residue key, atom name) while buffering altLocs.
type ResidueKey = (i32, Option<char>);

/// Parse PDB-format text into a [`Structure`].
///
/// Keeps only the first MODEL, drops HETATM, resolves alternate locations by
/// occupancy, and groups atoms into residues and chains preserving file order
/// of first appearance (residues sorted by sequence number then insertion
/// code within each chain).
pub fn parse_structure(text: &str) -> Result<Structure, PdbError> {
    let mut id = String::new();
    // chain id -> (first-appearance rank, residues)
    let mut chain_rank: Vec<char> = Vec::new();
    #[allow(clippy::type_complexity)]
    let mut chains: BTreeMap<char, BTreeMap<ResidueKey, (String, Vec<Atom>)>> = BTreeMap::new();
    let mut in_first_model = true;
    let mut seen_model = false;
    let mut seen_atoms = false;

    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let record = slice(line, 0, 6).trim_end();
        match record {
            "HEADER" => {
                let tag = slice(line, 62, 66).trim();
                if !tag.is_empty() {
                    id = tag.to_string();
                }
            }
            "MODEL" => {
                if seen_model {
                    in_first_model = false;
                } else {
                    seen_model = true;
                    in_first_model = true;
                }
            }
            "ENDMDL" => {
                if seen_model {
                    in_first_model = false;
                }
            }
            "ATOM" => {
                if !in_first_model {
                    continue;
                }
                seen_atoms = true;
                let serial: i64 =
                    slice(line, 6, 11)
                        .trim()
                        .parse()
                        .map_err(|_| PdbError::MalformedRecord {
                            line: lineno,
                            field: "serial",
                        })?;
                let name = slice(line, 12, 16).trim().to_string();
                if name.is_empty() {
                    return Err(PdbError::MalformedRecord {
                        line: lineno,
                        field: "name",
                    });
                }
                let alt_loc = char_at(line, 16);
                let res_name = slice(line, 17, 20).trim().to_string();
                let chain_id = char_at(line, 21).unwrap_or(' ');
                let residue_seq: i32 =
                    slice(line, 22, 26)
                        .trim()
                        .parse()
                        .map_err(|_| PdbError::MalformedRecord {
                            line: lineno,
                            field: "resSeq",
                        })?;
                let insertion_code = char_at(line, 26);
                let x = parse_f64(line, lineno, 30, 38, "x")?;
                let y = parse_f64(line, lineno, 38, 46, "y")?;
                let z = parse_f64(line, lineno, 46, 54, "z")?;
                let occ_text = slice(line, 54, 60).trim();
                let occupancy = if occ_text.is_empty() {
                    None
                } else {
                    let value = parse_f64(line, lineno, 54, 60, "occupancy")?;
                    if !(0.0..=1.0).contains(&value) {
                        return Err(PdbError::MalformedRecord {
                            line: lineno,
                            field: "occupancy",
                        });
                    }
                    Some(value)
                };
                let element = {
                    let e = slice(line, 76, 78).trim().to_string();
                    if e.is_empty() {
                        name.chars()
                            .find(|c| c.is_ascii_alphabetic())
                            .map(|c| c.to_string())
                            .unwrap_or_default()
                    } else {
                        e
                    }
                };

                let atom = Atom {
                    serial,
                    name,
                    alt_loc,
                    residue_seq,
                    insertion_code,
                    chain_id,
                    position: Vec3::new(x, y, z),
                    element,
                    occupancy,
                };

                if !chain_rank.contains(&chain_id) {
                    chain_rank.push(chain_id);
                }
                let residues = chains.entry(chain_id).or_default();
                let entry = residues
                    .entry((residue_seq, insertion_code))
                    .or_insert_with(|| (res_name.clone(), Vec::new()));
                insert_with_altloc(&mut entry.1, atom);
            }
            _ => {}
        }
    }

    if !seen_atoms {
        return Err(PdbError::EmptyStructure);
    }

    let chains = chain_rank
        .into_iter()
        .map(|cid| Chain {
            id: cid,
            residues: chains
                .remove(&cid)
                .unwrap_or_default()
                .into_iter()
                .map(|((seq, icode), (name, atoms))| Residue {
                    seq,
                    insertion_code: icode,
                    name,
                    atoms,
                })
                .collect(),
        })
        .collect();

    Ok(Structure { id, chains })
}

/// Keep the highest-occupancy alternate location per atom name; ties go to
/// the lexicographically smallest altLoc.
fn insert_with_altloc(atoms: &mut Vec<Atom>, atom: Atom) {
    if let Some(existing) = atoms.iter_mut().find(|a| a.name == atom.name) {
        let old = (existing.occupancy.unwrap_or(1.0), existing.alt_loc);
        let new = (atom.occupancy.unwrap_or(1.0), atom.alt_loc);
        let replace = new.0 > old.0 || (new.0 == old.0 && new.1 < old.1);
        if replace {
            *existing = atom;
        }
    } else {
        atoms.push(atom);
    }
}

/// Serialize the structure back to fixed-column ATOM records. Round-trips
/// through [`parse_structure`].
pub fn write_structure(structure: &Structure) -> String {
    let mut out = String::new();
    if !structure.id.is_empty() {
        let _ = writeln!(out, "HEADER{:56}{:>4}", "", structure.id);
    }
    for chain in &structure.chains {
        for residue in &chain.residues {
            for atom in &residue.atoms {
                // Atom name column convention: names shorter than four
                // characters start in column 14.
                let name = if atom.name.len() >= 4 {
                    atom.name.clone()
                } else {
                    format!(" {:<3}", atom.name)
                };
                // Occupancy fills columns 55-60, the blank run covers the
                // temperature factor and segment fields, element sits at
                // columns 77-78.
                let _ = writeln!(
                    out,
                    "ATOM  {:>5} {:<4}{}{:<3} {}{:>4}{}   {:8.3}{:8.3}{:8.3}{}                {:>2}",
                    atom.serial,
                    name,
                    atom.alt_loc.unwrap_or(' '),
                    residue.name,
                    chain.id,
                    residue.seq,
                    atom.insertion_code.unwrap_or(' '),
                    atom.position.x,
                    atom.position.y,
                    atom.position.z,
                    match atom.occupancy {
                        Some(o) => format!("{o:6.2}"),
                        None => "      ".to_string(),
                    },
                    atom.element,
                );
            }
        }
    }
    out.push_str("END\n");
    out
}
