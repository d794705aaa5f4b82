//! The aggregate report document and its renderings.

use parconf_core::lie::LieError;
use parconf_core::*;
use serde::Serialize;

#[derive(Serialize)]
pub struct ReportDoc {
    pub genus: usize,
    pub graph: Graph,
    pub b1: usize,
    pub formality: Formality,
    pub admissible_maps: Vec<String>,
    pub resonance_components: Vec<ComponentDoc>,
    pub lcs: Option<LcsDoc>,
}

#[derive(Serialize)]
pub struct ComponentDoc {
    pub label: String,
    pub dim: usize,
}

#[derive(Serialize)]
pub struct LcsDoc {
    pub genus: usize,
    pub graph: Graph,
    pub grading: String,
    pub max_weight: u32,
    pub ranks: Vec<usize>,
}

pub fn build_report(
    genus: usize,
    graph: &Graph,
    max_weight: Option<u32>,
) -> Result<ReportDoc, LieError> {
    let m = build_model(genus, graph);
    let maps = enumerate_admissible(&m);
    let comps = resonance_components(&m);
    let lcs = match max_weight {
        None => None,
        Some(d) => Some(LcsDoc {
            genus,
            graph: graph.clone(),
            grading: "bracket-length".into(),
            max_weight: d,
            ranks: lcs_ranks(&reduced_presentation(genus, graph), d)?.ranks,
        }),
    };
    Ok(ReportDoc {
        genus,
        graph: graph.clone(),
        b1: m.cdga.betti1(),
        formality: formality_classify(genus, graph),
        admissible_maps: maps.iter().map(|f| f.label.to_string()).collect(),
        resonance_components: comps
            .iter()
            .map(|c| ComponentDoc {
                label: c.origin.to_string(),
                dim: c.subspace.dim(),
            })
            .collect(),
        lcs,
    })
}

pub fn print_text(doc: &ReportDoc) {
    println!("partial configuration space F({}, {})", doc.genus, doc.graph);
    println!("  b1 = {}", doc.b1);
    println!("  formality: {}", doc.formality);
    if doc.admissible_maps.is_empty() {
        println!("  admissible maps of general type: none");
    } else {
        println!(
            "  admissible maps of general type ({}):",
            doc.admissible_maps.len()
        );
        for label in &doc.admissible_maps {
            println!("    {label}");
        }
    }
    if doc.resonance_components.is_empty() {
        println!("  resonance variety: empty");
    } else {
        println!("  resonance components:");
        for c in &doc.resonance_components {
            println!("    {} (dim {})", c.label, c.dim);
        }
    }
    if let Some(lcs) = &doc.lcs {
        println!("  lcs ranks through weight {}:", lcs.max_weight);
        for (k, r) in lcs.ranks.iter().enumerate() {
            println!("    weight {:>2}: {r}", k + 1);
        }
    }
}
