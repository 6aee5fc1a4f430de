//! Command dispatch: each command turns a scenario into a list of checks.

use std::sync::Arc;

use deloc_core::charts::LinearChart;
use deloc_core::complexes::EquivariantComplex;
use deloc_core::groupoids::{
    inertia_of_morphism, morita_decompose_inertia, GeneralizedMorphism, InertiaGroupoid,
};
use deloc_core::groups::{FiniteGroup, GroupEmbedding};
use deloc_core::reps::Representation;
use deloc_core::rrg::{
    check_functoriality, check_general_degree0_with, check_iso_spatial_with, check_td_pullback,
    check_zero_section_with, RrgError,
};
use deloc_core::series::{todd_delocalized, zero_section_identity, DelocalizedClass, NormalModel};
use thiserror::Error;

use crate::report::{Check, Row};
use crate::scenario::{Block, GroupoidEntry, Scenario};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Inertia,
    Induce,
    Chern,
    Todd,
    RrgIso,
    RrgZeroSection,
    RrgGeneral,
    GroupoidCheck,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Inertia => "inertia",
            Command::Induce => "induce",
            Command::Chern => "chern",
            Command::Todd => "todd",
            Command::RrgIso => "rrg-iso",
            Command::RrgZeroSection => "rrg-zero-section",
            Command::RrgGeneral => "rrg-general",
            Command::GroupoidCheck => "groupoid-check",
        }
    }
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error("scenario has nothing for '{command}' to check: {needs}")]
    Empty {
        command: &'static str,
        needs: &'static str,
    },
    #[error("{0}")]
    Core(String),
}

fn core(e: impl ToString) -> RunError {
    RunError::Core(e.to_string())
}

pub fn run(command: Command, sc: &Scenario) -> Result<Vec<Check>, RunError> {
    let checks = match command {
        Command::Inertia => inertia(sc)?,
        Command::Induce => induce(sc)?,
        Command::Chern => chern(sc)?,
        Command::Todd => todd(sc)?,
        Command::RrgIso => blocks("iso-spatial", &sc.iso_spatial, |b, iso| {
            Ok(Check::from_report(
                &b.name,
                check_iso_spatial_with(iso, b.control.weight)?,
            ))
        })?,
        Command::RrgZeroSection => blocks("zero-section", &sc.zero_section, |b, zs| {
            Ok(Check::from_report(
                &b.name,
                check_zero_section_with(zs, b.control.convention)?,
            ))
        })?,
        Command::RrgGeneral => {
            let mut out = Vec::new();
            for b in &sc.general {
                match &b.built {
                    Ok(g) => {
                        let deg0 =
                            check_general_degree0_with(g, b.control.weight, b.control.convention)
                                .map_err(core)?;
                        out.push(Check::from_report(&b.name, deg0));
                        out.push(Check::from_report(
                            &b.name,
                            check_td_pullback(g).map_err(core)?,
                        ));
                    }
                    Err(reason) => out.push(invalid_block("general-degree0", &b.name, reason)),
                }
            }
            out
        }
        Command::GroupoidCheck => groupoid_check(sc)?,
    };
    if checks.is_empty() {
        let needs = match command {
            Command::Inertia => "charts or groupoids",
            Command::Induce => "an embedding and a representation of its source",
            Command::Chern => "complexes",
            Command::Todd => "models",
            Command::RrgIso => "rrg.iso_spatial blocks",
            Command::RrgZeroSection => "rrg.zero_section blocks",
            Command::RrgGeneral => "rrg.general blocks",
            Command::GroupoidCheck => "groupoids or morphisms",
        };
        return Err(RunError::Empty {
            command: command.name(),
            needs,
        });
    }
    Ok(checks)
}

fn invalid_block(check: &str, name: &str, reason: &str) -> Check {
    Check::failed(
        format!("{check}: {name}"),
        "complex",
        format!("invalid complex: {reason}"),
    )
}

fn blocks<T>(
    check: &str,
    list: &[Block<T>],
    f: impl Fn(&Block<T>, &T) -> Result<Check, RrgError>,
) -> Result<Vec<Check>, RunError> {
    list.iter()
        .map(|b| match &b.built {
            Ok(t) => f(b, t).map_err(core),
            Err(reason) => Ok(invalid_block(check, &b.name, reason)),
        })
        .collect()
}

fn class_label(group: &FiniteGroup, class: usize) -> (String, String, usize) {
    let g = group.conjugacy().class_reps[class];
    (format!("class {class}"), group.element_label(g), g)
}

fn same(a: &Arc<FiniteGroup>, b: &Arc<FiniteGroup>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

fn inertia(sc: &Scenario) -> Result<Vec<Check>, RunError> {
    let mut out = Vec::new();
    for (name, chart) in &sc.charts {
        out.push(chart_inertia(name, chart));
    }
    for (name, entry) in &sc.groupoids {
        out.push(morita(name, entry)?);
    }
    Ok(out)
}

fn chart_inertia(name: &str, chart: &LinearChart) -> Check {
    let group = chart.group();
    let rows = chart
        .inertia_data()
        .iter()
        .map(|c| {
            let s = c.summary(group);
            let normal: Vec<String> = s.normal.iter().map(|(z, m)| format!("{z}:{m}")).collect();
            let (key, label, _) = class_label(group, c.class);
            Row::new(key, label)
                .value("centralizer", s.centralizer_order)
                .value("fixed_dim", s.fixed_dim)
                .value("normal", format!("[{}]", normal.join(",")))
                .require(
                    s.centralizer_invariant,
                    "fixed subspace is not centralizer-invariant",
                )
                .require(
                    c.fixed_dim + c.normal_eigen.total_multiplicity() == chart.dim(),
                    "dimensions do not add up",
                )
        })
        .collect();
    Check::new(format!("inertia: {name}"), rows)
}

fn morita(name: &str, entry: &GroupoidEntry) -> Result<Check, RunError> {
    let (ix, models) =
        morita_decompose_inertia(&entry.group, entry.points, |g, x| entry.action[g][x])
            .map_err(core)?;
    let mut rows: Vec<Row> = models
        .iter()
        .map(|m| {
            let (key, label, _) = class_label(&entry.group, m.class);
            Row::new(key, label)
                .value("centralizer", m.centralizer_order)
                .value("fixed_points", m.fixed_points.len())
                .value("loops", m.loops)
                .require(m.morita, "comparison is not a Morita equivalence")
        })
        .collect();
    let loops: usize = models.iter().map(|m| m.loops).sum();
    rows.push(
        Row::new("total", "")
            .value("loops", loops)
            .value("inertia_objects", ix.groupoid().num_objects())
            .require(
                loops == ix.groupoid().num_objects(),
                "components do not cover the inertia",
            ),
    );
    Ok(Check::new(format!("morita: {name}"), rows))
}

fn induce(sc: &Scenario) -> Result<Vec<Check>, RunError> {
    let mut out = Vec::new();
    for (ename, emb) in &sc.embeddings {
        for (rname, rep) in &sc.representations {
            if !same(rep.group(), emb.source()) {
                continue;
            }
            out.push(induce_one(&format!("{rname} along {ename}"), emb, rep)?);
        }
    }
    Ok(out)
}

fn induce_one(name: &str, emb: &GroupEmbedding, rep: &Representation) -> Result<Check, RunError> {
    let chi = rep.character();
    let by_sum = chi.induce_by_sum(emb).map_err(core)?;
    let by_centralizers = chi.induce_by_centralizers(emb).map_err(core)?;
    let induced = rep.induce(emb).map_err(core)?;
    let big = emb.target();
    let rows = (0..big.num_classes())
        .map(|c| {
            let (key, label, h) = class_label(big, c);
            let values = [
                by_sum.value_at(h).clone(),
                by_centralizers.value_at(h).clone(),
                induced.trace_at(h),
            ];
            Row::new(key, label)
                .value("sum", &values[0])
                .value("centralizers", &values[1])
                .value("matrices", &values[2])
                .require(
                    values[0] == values[1] && values[1] == values[2],
                    "induction paths disagree",
                )
        })
        .collect();
    Ok(Check::new(format!("induce: {name}"), rows))
}

fn chern(sc: &Scenario) -> Result<Vec<Check>, RunError> {
    let mut out = Vec::new();
    for (name, complex) in &sc.complexes {
        let report = complex.validate();
        if !report.is_valid() {
            out.push(Check::failed(
                format!("chern: {name}"),
                "complex",
                format!("invalid complex: {report}"),
            ));
            continue;
        }
        out.push(chern_one(name, complex, sc.trunc)?);
        for (ename, emb) in &sc.embeddings {
            if same(emb.target(), complex.group()) {
                let report = check_functoriality(emb, complex).map_err(core)?;
                out.push(Check::from_report(format!("{name} along {ename}"), report));
            }
        }
    }
    Ok(out)
}

fn chern_one(name: &str, complex: &EquivariantComplex, trunc: usize) -> Result<Check, RunError> {
    let group = complex.group();
    let cohomology = complex.cohomology_supertrace().map_err(core)?;
    let ch = DelocalizedClass::chern_of_complex(complex, trunc);
    let degree_zero = ch.degree_zero();
    let rows = (0..group.num_classes())
        .map(|c| {
            let (key, label, g) = class_label(group, c);
            let values = [
                complex.supertrace_at(g),
                cohomology.value_at(g).clone(),
                degree_zero[c].clone(),
            ];
            Row::new(key, label)
                .value("supertrace", &values[0])
                .value("cohomology", &values[1])
                .value("ch_0", &values[2])
                .require(
                    values[0] == values[1] && values[1] == values[2],
                    "supertraces disagree",
                )
        })
        .collect();
    Ok(Check::new(format!("chern: {name}"), rows))
}

fn todd(sc: &Scenario) -> Result<Vec<Check>, RunError> {
    let rows = sc
        .models
        .iter()
        .map(|(name, lines)| {
            let model = NormalModel::from_eigenvalues(lines, sc.trunc);
            let td = todd_delocalized(&model);
            let identity = zero_section_identity(&model);
            let spectrum: Vec<String> = lines.iter().map(ToString::to_string).collect();
            let mut row = Row::new(name.clone(), format!("[{}]", spectrum.join(",")))
                .value("todd", td)
                .require(identity.passed, "zero-section identity fails");
            row.series = Some(identity);
            row
        })
        .collect::<Vec<_>>();
    if rows.is_empty() {
        return Ok(Vec::new());
    }
    Ok(vec![Check::new(format!("todd (trunc {})", sc.trunc), rows)])
}

fn groupoid_check(sc: &Scenario) -> Result<Vec<Check>, RunError> {
    let mut out = Vec::new();
    for (name, m) in &sc.morphisms {
        out.push(morphism_check(
            &format!("{name}: {} -> {}", m.source, m.target),
            &m.morphism,
        )?);
    }
    for (name, entry) in &sc.groupoids {
        out.push(morita(name, entry)?);
    }
    Ok(out)
}

fn flags_string(f: deloc_core::groupoids::EmbeddingFlags) -> String {
    format!(
        "{}/{}/{}",
        f.embedding as u8, f.iso_spatial as u8, f.stabilizer_preserving as u8
    )
}

fn morphism_check(name: &str, z: &GeneralizedMorphism) -> Result<Check, RunError> {
    let flags = z.classify();
    let mut rows = vec![
        Row::new("flags", "embedding/iso-spatial/stabilizer-preserving")
            .value("flags", flags_string(flags)),
    ];

    let (graph, projection) = z.graph().map_err(core)?;
    let graph_flags = graph.classify();
    let back = graph
        .compose(&GeneralizedMorphism::comma(&projection).map_err(core)?)
        .map_err(core)?;
    rows.push(
        Row::new("graph", "")
            .value("flags", flags_string(graph_flags))
            .value("size", graph.size())
            .require(graph_flags.embedding, "graph is not an embedding")
            .require(
                back.isomorphism_to(z).is_some(),
                "graph followed by the projection is not isomorphic to the morphism",
            ),
    );

    let row = Row::new("factorization", "");
    rows.push(if flags.embedding {
        let f = z.factorize().map_err(core)?;
        let composed = f.first.compose(&f.second).map_err(core)?;
        row.value("first", flags_string(f.first.classify()))
            .value("second", flags_string(f.second.classify()))
            .value("image_objects", f.image.num_objects())
            .require(
                f.first.classify().iso_spatial,
                "first factor is not iso-spatial",
            )
            .require(
                f.second.classify().stabilizer_preserving,
                "second factor is not stabilizer-preserving",
            )
            .require(
                composed.isomorphism_to(z).is_some(),
                "factors do not compose back to the morphism",
            )
    } else {
        row.skip("not an embedding")
    });

    let ig = InertiaGroupoid::new(z.source()).map_err(core)?;
    let ih = InertiaGroupoid::new(z.target()).map_err(core)?;
    let iz = inertia_of_morphism(z, &ig, &ih).map_err(core)?;
    let inertia_flags = iz.classify();
    rows.push(
        Row::new("inertia", "")
            .value("flags", flags_string(inertia_flags))
            .value("size", iz.size())
            .require(
                !(flags.embedding && flags.stabilizer_preserving)
                    || (inertia_flags.embedding && inertia_flags.stabilizer_preserving),
                "inertia morphism loses stabilizer preservation",
            ),
    );
    Ok(Check::new(format!("groupoid: {name}"), rows))
}
