//! The end-to-end generation pipeline: population, affiliations,
//! sub-cliques, graph assembly, finalization.

use crate::affiliation::{assign_schools, assign_workplaces, carve_subcliques, Subclique};
use crate::config::DemographyConfig;
use crate::graph::{assemble_graph, finalize_caregivers, SocialGraph};
use crate::population::{
    assign_marital_men, attach_children, form_partnerships, synthesize_ages, Population,
    SynthesisError,
};
use crate::report::GenerationReport;
use crate::rng::RandomSource;

/// Everything one seeded run produces. Group memberships live inside the
/// graph; sub-cliques are kept for inspection and tests.
#[derive(Debug, Clone)]
pub struct Generated {
    pub population: Population,
    pub subcliques: Vec<Subclique>,
    pub graph: SocialGraph,
    pub report: GenerationReport,
    pub seed: u64,
}

/// Run the whole pipeline for one `(config, n, seed)` triple.
pub fn generate(
    config: &DemographyConfig,
    n: usize,
    seed: u64,
) -> Result<Generated, SynthesisError> {
    let mut rng = RandomSource::new(seed);
    let mut population = synthesize_ages(config, n, &mut rng)?;
    assign_marital_men(&mut population, config, &mut rng);
    let downgrades = form_partnerships(&mut population, config, &mut rng);
    let shortfall = attach_children(&mut population, config, &mut rng);

    let mut groups = assign_schools(&population, config, &mut rng);
    let mut companies = assign_workplaces(&population, config, &mut rng);
    let school_count = groups.len() as u32;
    for company in &mut companies {
        company.id += school_count;
    }
    groups.extend(companies);
    let subcliques = carve_subcliques(&groups, config, &rng);

    let mut graph = assemble_graph(&population, &subcliques, groups);
    let components = finalize_caregivers(&mut graph, &population, config, &mut rng);
    let report = GenerationReport::from_stages(n, seed, downgrades, shortfall, &components);
    Ok(Generated {
        population,
        subcliques,
        graph,
        report,
        seed,
    })
}
