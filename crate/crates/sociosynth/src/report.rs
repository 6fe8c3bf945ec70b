//! Per-run generation report: every fallback the pipeline took on the
//! way to a connected graph, so no repair happens silently.

use std::io::{self, Write};

use crate::graph::ComponentReport;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GenerationReport {
    pub n: usize,
    pub seed: u64,
    /// Men downgraded to single because no eligible partner existed.
    pub partnership_downgrades: u64,
    /// Drawn kid slots that found no pool member in the age window.
    pub kid_shortfall: u64,
    pub caregiver_edges: u64,
    /// Caregiver/repair targets picked outside the age window.
    pub caregiver_fallbacks: u64,
    pub repair_edges: u64,
    pub components_before_repair: u64,
}

impl GenerationReport {
    pub fn from_stages(
        n: usize,
        seed: u64,
        partnership_downgrades: u64,
        kid_shortfall: u64,
        components: &ComponentReport,
    ) -> GenerationReport {
        GenerationReport {
            n,
            seed,
            partnership_downgrades,
            kid_shortfall,
            caregiver_edges: components.caregiver_edges_added as u64,
            caregiver_fallbacks: components.fallbacks as u64,
            repair_edges: components.repair_edges_added as u64,
            components_before_repair: components.components_before_repair as u64,
        }
    }

    /// key=value lines, one per field.
    pub fn write_text<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "n={}", self.n)?;
        writeln!(w, "seed={}", self.seed)?;
        writeln!(w, "partnership_downgrades={}", self.partnership_downgrades)?;
        writeln!(w, "kid_shortfall={}", self.kid_shortfall)?;
        writeln!(w, "caregiver_edges={}", self.caregiver_edges)?;
        writeln!(w, "caregiver_fallbacks={}", self.caregiver_fallbacks)?;
        writeln!(w, "repair_edges={}", self.repair_edges)?;
        writeln!(w, "components_before_repair={}", self.components_before_repair)?;
        Ok(())
    }
}
