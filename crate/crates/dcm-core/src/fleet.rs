//! The mix of mitigation resources available to the dispatcher.

use crate::cvr::CvrSpec;
use crate::resources::{BessSpec, DgSpec};
use crate::tcl::TclGroupSpec;

/// All resources directly controlled by the load serving entity. Every
/// member is optional; an empty fleet is valid and dispatches nothing.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ResourceFleet {
    pub bess: Option<BessSpec>,
    pub dg: Option<DgSpec>,
    pub cvr: Option<CvrSpec>,
    pub tcl_groups: Vec<TclGroupSpec>,
}

impl ResourceFleet {
    pub fn empty() -> Self {
        Self::default()
    }

    /// The reference setup: a 40 MW generator, a 2-hour 10 MW battery, one
    /// aggregated CVR resource, and two 30,000-unit HVAC control groups.
    pub fn reference_setup() -> Self {
        Self {
            bess: Some(BessSpec::default()),
            dg: Some(DgSpec::default()),
            cvr: Some(CvrSpec::default()),
            tcl_groups: vec![TclGroupSpec::cycling(30_000, 5.0), TclGroupSpec::full_off(30_000, 5.0)],
        }
    }

    pub fn is_empty(&self) -> bool {
        self.bess.is_none() && self.dg.is_none() && self.cvr.is_none() && self.tcl_groups.is_empty()
    }
}
