use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use cobweb::blockgraph::{
    build_block_graph, count_cliques, enumerate_maximal_cliques, find_clique, CliqueSearch,
};
use cobweb::coefficients::{check_fnomial_recurrence, check_multi_recurrence, fnomial, multi_fnomial, RecurrenceCheck};
use cobweb::format::dot::graph_to_dot;
use cobweb::format::json::{graph_to_json, layer_to_json, tiling_doc, tiling_from_json, tiling_to_json, to_json};
use cobweb::format::svg::{render_layer, render_tiling, Style};
use cobweb::geometry::Layer;
use cobweb::tiling::{
    construct_all_tilings, construct_multi_tiling, construct_tiling, count_construction_tilings,
    enumerate_all_tilings, EnumerationLimits, DEFAULT_WORK_CAP,
};
use cobweb::{ChoiceStrategy, Composition, FSequence, ShapeFamily, Tiling};
use serde_json::json;

use crate::config::{settings, Settings};
use crate::{Cli, Command, CountMode, Usage};

/// Cliques kept in memory by `graph --count-max-cliques`.
const MAX_CLIQUES_KEPT: usize = 1000;

pub fn run(cli: Cli) -> Result<ExitCode> {
    let s = settings(&cli.global)?;
    match cli.command {
        Command::Seq { family, count } => seq(&s, &family, count),
        Command::Coeff {
            family,
            n,
            k,
            check_recurrence,
        } => coeff(&s, &family, n, k, check_recurrence),
        Command::Multicoeff {
            family,
            n,
            parts,
            check_recurrence,
        } => multicoeff(&s, &family, n, &parts, check_recurrence),
        Command::Admissible { family, bound } => admissible(&s, &family, bound),
        Command::Paths {
            family,
            k,
            n,
            list,
            out,
        } => paths(&s, &family, k, n, list, out.as_deref()),
        Command::Tile {
            family,
            k,
            n,
            strategy,
            out,
        } => tile(&s, &family, k, n, strategy, out.as_deref()),
        Command::Multitile {
            family,
            n,
            parts,
            strategy,
            out,
        } => multitile(&s, &family, n, &parts, strategy, out.as_deref()),
        Command::CountTilings { family, k, n, mode } => count_tilings(&s, &family, k, n, mode),
        Command::Graph {
            family,
            k,
            n,
            dot,
            out,
            find_clique,
            count_cliques,
            count_max_cliques,
        } => graph(
            &s,
            &family,
            (k, n),
            dot.as_deref(),
            out.as_deref(),
            [find_clique, count_cliques, count_max_cliques],
        ),
        Command::Verify { file } => verify(&s, &file),
        Command::Render {
            file,
            out,
            level_spacing,
            vertex_spacing,
            vertex_radius,
            colors,
        } => {
            let mut style = Style::default();
            if let Some(v) = level_spacing {
                style.level_spacing = v;
            }
            if let Some(v) = vertex_spacing {
                style.vertex_spacing = v;
            }
            if let Some(v) = vertex_radius {
                style.vertex_radius = v;
            }
            if let Some(c) = colors {
                style.colors = c;
            }
            render(&file, out.as_deref(), &style)
        }
    }
}

/// Writes through a temporary sibling so a failed write leaves no partial file.
fn write_file(path: &Path, contents: &str) -> Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".partial");
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, contents).with_context(|| format!("writing {}", tmp.display()))?;
    fs::rename(&tmp, path).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Usage(format!("cannot read {}: {e}", path.display())).into())
}

fn layer(family: &FSequence, k: usize, n: usize) -> Result<Layer> {
    Layer::new(family, k, n).map_err(|e| Usage(e.to_string()).into())
}

fn print_json(value: &serde_json::Value) {
    print!("{}", to_json(value));
}

fn seq(s: &Settings, family: &FSequence, count: usize) -> Result<ExitCode> {
    let terms = (1..=count)
        .map(|i| family.term(i).map(|t| t.to_string()))
        .collect::<Result<Vec<_>, _>>()?;
    if s.json {
        print_json(&json!({ "family": family.to_string(), "terms": terms }));
    } else {
        println!("{}", terms.join(" "));
    }
    Ok(ExitCode::SUCCESS)
}

fn recurrence_text(check: &RecurrenceCheck) -> String {
    let sum: Vec<String> = check.terms.iter().map(|(l, c)| format!("{l}*{c}")).collect();
    let verdict = if check.holds() { "holds" } else { "FAILS" };
    format!("{} = {} = {} ({verdict})", check.lhs, sum.join(" + "), check.rhs)
}

fn recurrence_json(check: &RecurrenceCheck) -> serde_json::Value {
    json!({
        "lhs": check.lhs.to_string(),
        "rhs": check.rhs.to_string(),
        "terms": check.terms.iter().map(|(l, c)| [l.to_string(), c.to_string()]).collect::<Vec<_>>(),
        "holds": check.holds(),
    })
}

fn report_coefficient(s: &Settings, value: String, check: Option<RecurrenceCheck>) -> ExitCode {
    let holds = check.as_ref().is_none_or(|c| c.holds());
    if s.json {
        let mut doc = json!({ "value": value });
        if let Some(c) = &check {
            doc["recurrence"] = recurrence_json(c);
        }
        print_json(&doc);
    } else {
        println!("{value}");
        if let Some(c) = &check {
            println!("recurrence: {}", recurrence_text(c));
        }
    }
    if holds {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn coeff(s: &Settings, family: &FSequence, n: usize, k: usize, check: bool) -> Result<ExitCode> {
    let value = fnomial(family, n, k)?.to_string();
    let check = if check { Some(check_fnomial_recurrence(family, n, k)?) } else { None };
    Ok(report_coefficient(s, value, check))
}

fn multicoeff(s: &Settings, family: &FSequence, n: usize, parts: &Composition, check: bool) -> Result<ExitCode> {
    if parts.total() != n {
        return Err(Usage(format!("parts {parts} add up to {}, not {n}", parts.total())).into());
    }
    let value = multi_fnomial(family, parts)?.to_string();
    let check = if check { Some(check_multi_recurrence(family, parts)?) } else { None };
    Ok(report_coefficient(s, value, check))
}

fn admissible(s: &Settings, family: &FSequence, bound: usize) -> Result<ExitCode> {
    let report = family.is_cobweb_admissible(bound);
    if s.json {
        print!("{}", to_json(&report));
    } else if let Some((n, m)) = report.first_failure {
        println!("not admissible: ({n} over {m}) is not a natural number");
    } else {
        println!("admissible for n <= {} (bounded check)", report.bound);
    }
    Ok(if report.admissible_up_to_bound {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn paths(s: &Settings, family: &FSequence, k: usize, n: usize, list: bool, out: Option<&Path>) -> Result<ExitCode> {
    let layer = layer(family, k, n)?;
    let volume = layer.volume();
    let listed: Option<Vec<Vec<u32>>> = if list {
        layer.count_max_paths(s.cap_volume)?;
        Some(layer.max_paths().map(|p| p.0).collect())
    } else {
        None
    };
    if let Some(path) = out {
        write_file(path, &layer_to_json(&layer))?;
    }
    if s.json {
        let mut doc = json!({
            "family": family.to_string(),
            "span": layer.span(),
            "sizes": layer.sizes(),
            "volume": volume.to_string(),
        });
        if let Some(p) = &listed {
            doc["paths"] = json!(p);
        }
        print_json(&doc);
    } else {
        println!("layer {family} <{k} -> {n}>, level sizes {:?}", layer.sizes());
        println!("volume {volume}");
        for p in listed.iter().flatten() {
            let labels: Vec<String> = p.iter().map(|v| v.to_string()).collect();
            println!("{}", labels.join(" "));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn pick_strategy(s: &Settings, strategy: Option<ChoiceStrategy>) -> ChoiceStrategy {
    match (strategy, s.seed) {
        (Some(st), _) => st,
        (None, Some(seed)) => ChoiceStrategy::Seeded(seed),
        (None, None) => ChoiceStrategy::LowestLabels,
    }
}

fn print_tiling(s: &Settings, tiling: &Tiling) {
    if s.json {
        print!("{}", tiling_to_json(tiling));
        return;
    }
    let [k, n] = tiling.layer().span();
    println!(
        "{} blocks {} tile {} <{k} -> {n}> ({})",
        tiling.len(),
        tiling.shape(),
        tiling.layer().seq(),
        tiling.provenance()
    );
    for (i, block) in tiling.blocks().iter().enumerate() {
        let levels: Vec<String> = block
            .levels()
            .iter()
            .map(|l| l.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","))
            .collect();
        println!("  {i}: {}", levels.join(" | "));
    }
}

fn tile(
    s: &Settings,
    family: &FSequence,
    k: usize,
    n: usize,
    strategy: Option<ChoiceStrategy>,
    out: Option<&Path>,
) -> Result<ExitCode> {
    layer(family, k, n)?;
    let strategy = pick_strategy(s, strategy);
    if strategy == ChoiceStrategy::Exhaustive {
        let census = construct_all_tilings(family, k, n, DEFAULT_WORK_CAP)?;
        let doc = json!({
            "choice_sequences": census.choice_sequences.to_string(),
            "tilings": census.tilings.iter().map(tiling_doc).collect::<Vec<_>>(),
        });
        if let Some(path) = out {
            write_file(path, &to_json(&doc))?;
        }
        if s.json {
            print_json(&doc);
        } else {
            println!(
                "{} distinct tilings from {} choice sequences",
                census.tilings.len(),
                census.choice_sequences
            );
        }
        return Ok(ExitCode::SUCCESS);
    }
    let tiling = construct_tiling(family, k, n, strategy)?;
    if let Some(path) = out {
        write_file(path, &tiling_to_json(&tiling))?;
    }
    print_tiling(s, &tiling);
    Ok(ExitCode::SUCCESS)
}

fn multitile(
    s: &Settings,
    family: &FSequence,
    n: usize,
    parts: &Composition,
    strategy: Option<ChoiceStrategy>,
    out: Option<&Path>,
) -> Result<ExitCode> {
    if parts.total() != n {
        return Err(Usage(format!("parts {parts} add up to {}, not {n}", parts.total())).into());
    }
    let strategy = pick_strategy(s, strategy);
    if strategy == ChoiceStrategy::Exhaustive {
        return Err(Usage("multitile supports the lowest and seed:N strategies".into()).into());
    }
    let tiling = construct_multi_tiling(family, parts, strategy)?;
    if let Some(path) = out {
        write_file(path, &tiling_to_json(&tiling))?;
    }
    print_tiling(s, &tiling);
    Ok(ExitCode::SUCCESS)
}

fn count_tilings(s: &Settings, family: &FSequence, k: usize, n: usize, mode: CountMode) -> Result<ExitCode> {
    let layer = layer(family, k, n)?;
    let doc = match mode {
        CountMode::Formula => json!({ "mode": "formula", "count": count_construction_tilings(family, k, n)?.to_string() }),
        CountMode::Construction => {
            let census = construct_all_tilings(family, k, n, DEFAULT_WORK_CAP)?;
            json!({
                "mode": "construction",
                "count": census.tilings.len().to_string(),
                "choice_sequences": census.choice_sequences.to_string(),
            })
        }
        CountMode::Exhaustive => {
            let limits = EnumerationLimits {
                max_volume: s.cap_volume,
                max_nodes: s.budget,
                ..EnumerationLimits::default()
            };
            let census = enumerate_all_tilings(&layer, &ShapeFamily::Plain(layer.height()), limits)?;
            json!({
                "mode": "exhaustive",
                "count": census.total.to_string(),
                "certificate": census.certificate,
            })
        }
    };
    let complete = doc
        .get("certificate")
        .is_none_or(|c| c["completed"].as_bool() == Some(true));
    if s.json {
        print_json(&doc);
    } else {
        let count = doc["count"].as_str().unwrap_or_default();
        match mode {
            CountMode::Formula => println!("{count}"),
            CountMode::Construction => println!(
                "{count} distinct tilings from {} choice sequences",
                doc["choice_sequences"].as_str().unwrap_or_default()
            ),
            CountMode::Exhaustive if complete => println!("{count} (search complete)"),
            CountMode::Exhaustive => println!("at least {count} (node budget exhausted)"),
        }
    }
    Ok(if complete { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn graph(
    s: &Settings,
    family: &FSequence,
    (k, n): (usize, usize),
    dot: Option<&Path>,
    out: Option<&Path>,
    [find, count, count_max]: [bool; 3],
) -> Result<ExitCode> {
    let layer = layer(family, k, n)?;
    let g = build_block_graph(&layer, s.cap_vertices)?;
    let mut doc = json!({
        "family": family.to_string(),
        "span": layer.span(),
        "vertices": g.vertex_count(),
        "edges": g.edge_count(),
        "target": g.target(),
    });
    let mut code = ExitCode::SUCCESS;
    let mut highlight = Vec::new();
    if find {
        doc["clique"] = match find_clique(&g, g.target(), s.budget) {
            CliqueSearch::Found(c) => {
                highlight = c.clone();
                json!({ "status": "found", "vertices": c })
            }
            CliqueSearch::None => {
                code = ExitCode::from(1);
                json!({ "status": "none" })
            }
            CliqueSearch::Inconclusive => {
                code = ExitCode::from(1);
                json!({ "status": "inconclusive" })
            }
        };
    }
    if count {
        doc["clique_count"] = json!(count_cliques(&g, g.target(), s.budget));
    }
    if count_max {
        let maximal = enumerate_maximal_cliques(&g, MAX_CLIQUES_KEPT, s.budget);
        doc["maximal_cliques"] = json!({ "count": maximal.count, "completed": maximal.completed });
    }
    if let Some(path) = dot {
        write_file(path, &graph_to_dot(&g, &highlight))?;
    }
    if let Some(path) = out {
        write_file(path, &graph_to_json(&g))?;
    }
    if s.json {
        print_json(&doc);
    } else {
        println!(
            "{} vertices, {} edges, tilings are cliques of size {}",
            g.vertex_count(),
            g.edge_count(),
            g.target()
        );
        if let Some(c) = doc.get("clique") {
            match c["status"].as_str() {
                Some("found") => println!("clique: {}", c["vertices"]),
                Some("none") => println!("no clique of size {}: the layer has no tiling", g.target()),
                _ => println!("clique search inconclusive: node budget exhausted"),
            }
        }
        if let Some(c) = doc.get("clique_count") {
            let bound = if c["completed"] == json!(true) { "" } else { " (lower bound)" };
            println!("cliques of size {}: {}{bound}", g.target(), c["count"]);
        }
        if let Some(c) = doc.get("maximal_cliques") {
            let bound = if c["completed"] == json!(true) { "" } else { " (lower bound)" };
            println!("maximal cliques: {}{bound}", c["count"]);
        }
    }
    Ok(code)
}

fn verify(s: &Settings, file: &Path) -> Result<ExitCode> {
    let text = read_file(file)?;
    let tiling = tiling_from_json(&text).with_context(|| format!("reading {}", file.display()))?;
    let report = tiling.verify(s.cap_volume);
    if s.json {
        print!("{}", to_json(&report));
    } else if report.valid {
        println!("valid, {} blocks", report.blocks);
    } else {
        println!("invalid, {} blocks", report.blocks);
        for v in &report.violations {
            println!("  {v}");
        }
    }
    Ok(if report.valid { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn render(file: &Path, out: Option<&Path>, style: &Style) -> Result<ExitCode> {
    let text = read_file(file)?;
    let tiling = tiling_from_json(&text).with_context(|| format!("reading {}", file.display()))?;
    let svg = if tiling.is_empty() {
        render_layer(tiling.layer(), style)
    } else {
        render_tiling(&tiling, style)
    };
    match out {
        Some(path) => write_file(path, &svg)?,
        None => print!("{svg}"),
    }
    Ok(ExitCode::SUCCESS)
}
