use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::model::{canonical_pair, ServiceId};

/// Endpoint dependency matrix: directed call counts between services.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Edm {
    pub services: Vec<ServiceId>,
    cells: BTreeMap<(String, String), u32>,
}

impl Edm {
    pub fn new(services: Vec<ServiceId>) -> Self {
        Edm { services, cells: BTreeMap::new() }
    }

    pub fn add(&mut self, caller: &str, callee: &str, count: u32) -> Result<()> {
        if caller == callee {
            return Err(Error::InvalidPair(caller.to_string()));
        }
        if count == 0 {
            return Ok(());
        }
        *self.cells.entry((caller.to_string(), callee.to_string())).or_insert(0) += count;
        Ok(())
    }

    pub fn get(&self, caller: &str, callee: &str) -> u32 {
        self.cells
            .get(&(caller.to_string(), callee.to_string()))
            .copied()
            .unwrap_or(0)
    }

    pub fn cells(&self) -> impl Iterator<Item = (&str, &str, u32)> {
        self.cells.iter().map(|((a, b), v)| (a.as_str(), b.as_str(), *v))
    }

    pub fn total(&self) -> u64 {
        self.cells.values().map(|v| *v as u64).sum()
    }

    pub fn max(&self) -> u32 {
        self.cells.values().copied().max().unwrap_or(0)
    }
}

/// Data dependency matrix: shared-entity counts per unordered service pair,
/// stored once under the canonical order and read back symmetrically.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Ddm {
    pub services: Vec<ServiceId>,
    cells: BTreeMap<(String, String), u32>,
}

impl Ddm {
    pub fn new(services: Vec<ServiceId>) -> Self {
        Ddm { services, cells: BTreeMap::new() }
    }

    pub fn add(&mut self, a: &str, b: &str, count: u32) -> Result<()> {
        let (lo, hi) = canonical_pair(a, b)?;
        if count == 0 {
            return Ok(());
        }
        *self.cells.entry((lo.to_string(), hi.to_string())).or_insert(0) += count;
        Ok(())
    }

    pub fn get(&self, a: &str, b: &str) -> u32 {
        match canonical_pair(a, b) {
            Ok((lo, hi)) => self
                .cells
                .get(&(lo.to_string(), hi.to_string()))
                .copied()
                .unwrap_or(0),
            Err(_) => 0,
        }
    }

    /// Canonical-order pairs only; each unordered pair appears once.
    pub fn cells(&self) -> impl Iterator<Item = (&str, &str, u32)> {
        self.cells.iter().map(|((a, b), v)| (a.as_str(), b.as_str(), *v))
    }

    pub fn max(&self) -> u32 {
        self.cells.values().copied().max().unwrap_or(0)
    }
}

/// How a service pair depends: through endpoint calls, shared data, or both.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DepClass {
    EndpointsOnly,
    DataOnly,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SdmCell {
    pub endpoint_degree: u32,
    pub data_degree: u32,
}

impl SdmCell {
    pub fn class(&self) -> Result<DepClass> {
        match (self.endpoint_degree > 0, self.data_degree > 0) {
            (true, true) => Ok(DepClass::Both),
            (true, false) => Ok(DepClass::EndpointsOnly),
            (false, true) => Ok(DepClass::DataOnly),
            (false, false) => Err(Error::NoDependency),
        }
    }
}

/// Service dependency matrix: the endpoint and data degrees merged per
/// directed pair. Cells exist only where at least one degree is positive.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Sdm {
    pub services: Vec<ServiceId>,
    cells: BTreeMap<(String, String), SdmCell>,
}

impl Sdm {
    pub fn new(services: Vec<ServiceId>) -> Self {
        Sdm { services, cells: BTreeMap::new() }
    }

    pub fn set(&mut self, caller: &str, callee: &str, cell: SdmCell) -> Result<()> {
        if caller == callee {
            return Err(Error::InvalidPair(caller.to_string()));
        }
        cell.class()?;
        self.cells.insert((caller.to_string(), callee.to_string()), cell);
        Ok(())
    }

    pub fn get(&self, caller: &str, callee: &str) -> Option<SdmCell> {
        self.cells.get(&(caller.to_string(), callee.to_string())).copied()
    }

    pub fn cells(&self) -> impl Iterator<Item = (&str, &str, SdmCell)> {
        self.cells.iter().map(|((a, b), v)| (a.as_str(), b.as_str(), *v))
    }
}

/// Render an SDM cell as the compact "E.D" form: the integer part is the
/// endpoint degree, the part after the dot is the data degree, and the dot
/// is dropped when the data degree is zero. Display only; machine formats
/// carry the two integers separately because "0.12" would otherwise be
/// ambiguous with a fractional value.
pub fn sdm_display(cell: SdmCell) -> Result<String> {
    cell.class()?;
    if cell.data_degree == 0 {
        Ok(format!("{}", cell.endpoint_degree))
    } else {
        Ok(format!("{}.{}", cell.endpoint_degree, cell.data_degree))
    }
}

/// Inverse of [`sdm_display`].
pub fn sdm_parse(text: &str) -> Result<SdmCell> {
    let bad = || Error::InvalidCellDisplay(text.to_string());
    let (e_part, d_part) = match text.split_once('.') {
        Some((e, d)) => (e, Some(d)),
        None => (text, None),
    };
    if e_part.is_empty() || !e_part.bytes().all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let endpoint_degree: u32 = e_part.parse().map_err(|_| bad())?;
    let data_degree: u32 = match d_part {
        Some(d) if !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit()) => {
            let v = d.parse().map_err(|_| bad())?;
            if v == 0 {
                // "E.0" is never produced by the encoder.
                return Err(bad());
            }
            v
        }
        Some(_) => return Err(bad()),
        None => 0,
    };
    let cell = SdmCell { endpoint_degree, data_degree };
    cell.class().map_err(|_| bad())?;
    Ok(cell)
}
