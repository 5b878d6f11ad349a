//! The acceptance checks that need no HTTP server. Each returns a one-line
//! summary on success and the first counterexample on failure.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use vesa_core::graph::{dump_to_string, load_from_str, schema, EdgeKind, GraphStore, NodeKind};
use vesa_core::ingest::{parse_source_documents, ParsedSource, SourceConfig};
use vesa_core::query::{Catalog, FilterResult, QueryOptions, SelectionState};
use vesa_core::semantics::{compute_tfidf, mediation_witness, TokenizerConfig, DEFAULT_STOPWORDS};
use vesa_core::{build_graph, read_configured_fixtures, NodeId};

use super::*;

pub type Outcome = Result<String, String>;

pub fn demo_fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/demo")
}

pub fn demo_catalog() -> Catalog {
    let dir = demo_fixtures();
    let parsed = read_configured_fixtures(&dir.join("sources.json"), &dir).unwrap();
    let (store, _, _) = build_graph(&parsed, &TokenizerConfig::default()).unwrap();
    Catalog::new(store, &TokenizerConfig::default(), QueryOptions::default()).unwrap()
}

fn random_word(rng: &mut impl Rng) -> String {
    loop {
        let len = rng.gen_range(3..8);
        let word: String = (0..len).map(|_| rng.gen_range(b'a'..=b'z') as char).collect();
        if !DEFAULT_STOPWORDS.contains(&word.as_str()) {
            return word;
        }
    }
}

/// Random corpora of up to 50 documents over up to 200 terms, scored by the
/// library and by the brute-force oracle.
pub fn tfidf_suite(corpora: usize, seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut compared = 0;
    for corpus in 0..corpora {
        let vocabulary: Vec<String> = (0..rng.gen_range(1..=200)).map(|_| random_word(&mut rng)).collect();
        let phrases: Vec<String> = (0..5).map(|_| format!("{} {}", random_word(&mut rng), random_word(&mut rng))).collect();
        let n_docs = rng.gen_range(1..=50);
        let mut records = Vec::new();
        let mut streams = Vec::new();
        for d in 0..n_docs {
            let words: Vec<String> = (0..rng.gen_range(1..40)).map(|_| vocabulary.choose(&mut rng).unwrap().clone()).collect();
            let (title, body) = words.split_at(1);
            // mixed case in the abstract exercises lowercasing
            let abstract_text: Vec<String> = body
                .iter()
                .map(|w| if rng.gen_bool(0.2) { w.to_uppercase() } else { w.clone() })
                .collect();
            let count = rng.gen_range(0..3);
            let keywords: Vec<String> = phrases.choose_multiple(&mut rng, count).cloned().collect();
            let mut record = vesa_core::ingest::NormalizedDataset::new(
                vesa_core::ingest::RecordKind::Dataset,
                &format!("{corpus}-{d}"),
                "SYNTH",
                &title[0],
            );
            record.abstract_text = abstract_text.join(" ");
            record.keywords = keywords.iter().map(|k| k.to_uppercase()).collect();
            let mut stream = words.clone();
            stream.extend(keywords);
            streams.push(stream);
            records.push(record);
        }
        let parsed = vec![(source("synth"), ParsedSource { datasets: records, ..Default::default() })];
        let (store, _, _) = build_graph(&parsed, &TokenizerConfig::default()).map_err(|e| e.to_string())?;
        let expected = oracle_tfidf(&streams);
        let actual = compute_tfidf::<f64>(&store, &TokenizerConfig::default()).map_err(|e| e.to_string())?;
        let actual32 = compute_tfidf::<f32>(&store, &TokenizerConfig::default()).map_err(|e| e.to_string())?;
        let actual_terms: BTreeSet<&String> = actual.keys().collect();
        let expected_terms: BTreeSet<&String> = expected.keys().collect();
        if actual_terms != expected_terms {
            return Err(format!("corpus {corpus}: vocabulary differs"));
        }
        for (term, &(score, df)) in &expected {
            let got = &actual[term];
            if got.document_frequency != df {
                return Err(format!("corpus {corpus}: df({term}) = {} vs oracle {df}", got.document_frequency));
            }
            if relative_error(got.score, score) > 1e-9 {
                return Err(format!("corpus {corpus}: score({term}) = {} vs oracle {score}", got.score));
            }
            if relative_error(actual32[term].score as f64, score) > 1e-5 {
                return Err(format!("corpus {corpus}: f32 score({term}) = {} vs oracle {score}", actual32[term].score));
            }
            let holders: BTreeSet<String> = streams
                .iter()
                .enumerate()
                .filter(|(_, s)| s.contains(term))
                .map(|(d, _)| format!("Dataset/{corpus}-{d}"))
                .collect();
            let got_holders: BTreeSet<String> = got.dataset_ids.iter().map(|id| id.to_string()).collect();
            if holders != got_holders {
                return Err(format!("corpus {corpus}: postings of {term} differ"));
            }
            compared += 1;
        }
    }
    Ok(format!("{corpora} corpora, {compared} term scores within 1e-9 relative"))
}

fn ids(result: &FilterResult) -> BTreeSet<String> {
    result.dataset_ids.iter().map(|id| id.to_string()).collect()
}

/// The selection restricted to one dimension, for each dimension it sets.
fn single_dimensions(selection: &SelectionState) -> Vec<SelectionState> {
    let mut parts = Vec::new();
    let base = SelectionState::overview();
    if !selection.keywords.is_empty() {
        parts.push(SelectionState { keywords: selection.keywords.clone(), ..base.clone() });
    }
    if selection.time_range.is_some() {
        parts.push(SelectionState { time_range: selection.time_range.clone(), ..base.clone() });
    }
    if selection.spatial_box.is_some() {
        parts.push(SelectionState { spatial_box: selection.spatial_box, ..base.clone() });
    }
    if !selection.authors.is_empty() {
        parts.push(SelectionState { authors: selection.authors.clone(), ..base.clone() });
    }
    if !selection.sources.is_empty() {
        parts.push(SelectionState { sources: selection.sources.clone(), ..base.clone() });
    }
    parts
}

/// Random selections over a synthetic store: exact agreement with the
/// linear scan, refinement monotonicity and dimension commutativity.
pub fn cross_filter_suite(n_datasets: usize, n_selections: usize, seed: u64) -> Outcome {
    let datasets = synth_datasets(n_datasets, seed);
    let catalog = build_catalog(&datasets);
    if catalog.dataset_count() != n_datasets {
        return Err(format!("catalog holds {} of {n_datasets} datasets", catalog.dataset_count()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let mut non_empty = 0;
    for case in 0..n_selections {
        let selection = random_selection(&mut rng, &datasets);
        let result = catalog.evaluate(&selection).map_err(|e| format!("case {case}: {e}"))?;
        let got = ids(&result);
        let expected = oracle_filter(&datasets, &selection);
        if got != expected {
            return Err(format!(
                "case {case}: {} results vs oracle {} for {}",
                got.len(),
                expected.len(),
                serde_json::to_string(&selection).unwrap()
            ));
        }
        if result.total != got.len() || result.per_source.values().sum::<usize>() != result.total {
            return Err(format!("case {case}: totals inconsistent"));
        }
        non_empty += usize::from(!got.is_empty());

        // refinement: one more keyword or source never grows the result
        let mut refined = selection.clone();
        let extra = KEYWORDS.choose(&mut rng).unwrap().to_string();
        if catalog.keyword_node(&extra).is_some() {
            refined.keywords.push(extra);
        } else {
            refined.sources.push(CORPORA[0].to_string());
        }
        let refined_ids = ids(&catalog.evaluate(&refined).map_err(|e| e.to_string())?);
        if !refined_ids.is_subset(&got) {
            return Err(format!("case {case}: refinement grew the result"));
        }

        // commutativity: the conjunction equals the intersection of its
        // single-dimension results, and list order is irrelevant
        let mut intersection: Option<BTreeSet<String>> = None;
        for part in single_dimensions(&selection) {
            let part_ids = ids(&catalog.evaluate(&part).map_err(|e| e.to_string())?);
            intersection = Some(match intersection {
                None => part_ids,
                Some(acc) => acc.intersection(&part_ids).cloned().collect(),
            });
        }
        let intersection = intersection.unwrap_or_else(|| ids(&catalog.evaluate(&SelectionState::overview()).unwrap()));
        if intersection != got {
            return Err(format!("case {case}: dimensions do not commute"));
        }
        let mut shuffled = selection.clone();
        shuffled.keywords.reverse();
        shuffled.authors.reverse();
        shuffled.sources.reverse();
        if ids(&catalog.evaluate(&shuffled).map_err(|e| e.to_string())?) != got {
            return Err(format!("case {case}: list order changed the result"));
        }
    }
    Ok(format!("{n_selections} selections over {n_datasets} datasets ({non_empty} non-empty) match the linear scan"))
}

/// A STAC collection without keywords is reachable through the keyword of
/// a publication that mentions its mission.
pub fn terrasarx_scenario() -> Outcome {
    let catalog = demo_catalog();
    let selection = SelectionState::overview().with_keyword("flood events");
    let got = ids(&catalog.evaluate(&selection).map_err(|e| e.to_string())?);
    let collection = "STACCollection/TerraSarX";
    if !got.contains(collection) {
        return Err(format!("{collection} missing from {got:?}"));
    }
    let pangaea_peer = got
        .iter()
        .find(|id| id.starts_with("Dataset/") && catalog.dataset(&NodeId::parse(id).unwrap()).is_some_and(|d| d.corpus == "pangaea"))
        .ok_or("no PANGAEA dataset shares the keyword")?;
    let store = catalog.store();
    let keyword = catalog.keyword_node("flood events").ok_or("keyword node missing")?;
    let collection_id = NodeId::parse(collection).unwrap();
    let edge = store
        .edge_between(EdgeKind::HasKeyword, &collection_id, keyword)
        .ok_or("no hasKeyword edge on the collection")?;
    if edge.provenance() != Some(schema::PROVENANCE_MEDIATED) {
        return Err(format!("edge provenance is {:?}", edge.provenance()));
    }
    let witness = mediation_witness(store, edge).ok_or("mediated edge has no witness")?;
    // the witness path: publication -mentionsMission-> collection, publication -hasKeyword-> keyword
    if store.edge_between(EdgeKind::MentionsMission, &witness, &collection_id).is_none()
        || store.edge_between(EdgeKind::HasKeyword, &witness, keyword).is_none()
    {
        return Err(format!("witness {witness} does not close the path"));
    }
    Ok(format!("{collection} returned with {pangaea_peer}; mediated via {witness}"))
}

/// Raw source documents with random corruption: missing fields, wrong
/// types, malformed JSON, duplicates and conflicting re-ingests.
pub fn fuzzed_sources(seed: u64) -> Vec<(SourceConfig, ParsedSource)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let datasets = synth_datasets(rng.gen_range(5..60), seed);
    let mut pangaea_docs = Vec::new();
    for d in &datasets {
        let mut doc = json!({
            "id": format!("Dataset/{}", d.key),
            "dataset_title": d.title,
            "keywords": d.keywords,
            "authors": d.authors,
        });
        if let Some((s, e)) = &d.coverage {
            doc["temporal_coverage"] = json!({"start_date": s, "end_date": e});
        }
        if let Some(l) = &d.location {
            doc["location_data"] = json!({
                "west_bound_longitude": l.west, "east_bound_longitude": l.east,
                "north_bound_latitude": l.north, "south_bound_latitude": l.south,
            });
        }
        match rng.gen_range(0..12) {
            0 => {
                doc.as_object_mut().unwrap().remove("dataset_title");
            }
            1 => doc["temporal_coverage"] = json!("yesterday"),
            2 => doc["authors"] = json!(42),
            3 => doc["dataset_title"] = json!(format!("{} revised", d.title)),
            _ => {}
        }
        pangaea_docs.push((format!("{}.json", d.key), doc.to_string()));
        if rng.gen_ratio(1, 10) {
            pangaea_docs.push((format!("{}-dup.json", d.key), doc.to_string()));
        }
    }
    pangaea_docs.push(("broken.json".into(), "{\"id\": ".into()));

    let missions = ["terrasarx", "tandem-x", "sentinel-1", "envisat"];
    let mut stac_docs = Vec::new();
    for i in 0..rng.gen_range(1..6) {
        let mission = missions[rng.gen_range(0..missions.len())];
        let mut doc = json!({
            "id": format!("C{i}"),
            "title": format!("collection {i}"),
            "summaries": {"platform": [mission]},
            "extent": {"temporal": {"interval": [["2010-01-01T00:00:00Z", null]]}},
        });
        if rng.gen_bool(0.5) {
            doc["keywords"] = json!([KEYWORDS[rng.gen_range(0..KEYWORDS.len())]]);
        }
        stac_docs.push((format!("c{i}.json"), doc.to_string()));
    }

    let mut publication_docs = Vec::new();
    for i in 0..rng.gen_range(0..6) {
        let related: Vec<String> = (0..2)
            .map(|_| if rng.gen_bool(0.7) { datasets.choose(&mut rng).unwrap().key.clone() } else { "nope".into() })
            .collect();
        let doc = json!({
            "source_key": format!("pub-{i}"),
            "title": format!("publication {i}"),
            "keywords": KEYWORDS.choose_multiple(&mut rng, 2).collect::<Vec<_>>(),
            "mission_mentions": [missions[rng.gen_range(0..missions.len())]],
            "related_dataset_keys": related,
        });
        publication_docs.push((format!("p{i}.json"), doc.to_string()));
    }

    let config = |name: &str, kind: &str| -> SourceConfig { serde_json::from_value(json!({"name": name, "kind": kind})).unwrap() };
    [
        (config("pangaea", "pangaea"), pangaea_docs),
        (config("dlr", "stac"), stac_docs),
        (config("publications", "publication"), publication_docs),
    ]
    .into_iter()
    .map(|(source, docs)| {
        let parsed = parse_source_documents(&source, &docs);
        (source, parsed)
    })
    .collect()
}

/// Every edge has live endpoints of allowed kinds; every keyword and
/// temporal index entry points at a live node.
pub fn full_scan_integrity(store: &GraphStore) -> Result<(), String> {
    for edge in store.edges() {
        let (from, to) = (store.node(&edge.from), store.node(&edge.to));
        let (Some(from), Some(to)) = (from, to) else {
            return Err(format!("dangling edge {}", edge.id));
        };
        if !edge.kind.allows(from.kind, to.kind) {
            return Err(format!("edge {} joins {} to {}", edge.id, from.kind, to.kind));
        }
        if edge.provenance().is_none() {
            return Err(format!("edge {} has no provenance", edge.id));
        }
    }
    for node in store.nodes() {
        if node.id.kind() != node.kind {
            return Err(format!("node {} has kind {}", node.id, node.kind));
        }
        if node.kind == NodeKind::Keyword {
            let term = node.attrs.get("term").and_then(Value::as_str).unwrap_or_default();
            if store.keyword_node(term) != Some(&node.id) {
                return Err(format!("keyword index misses {}", node.id));
            }
        }
    }
    for id in store.temporal_index().intersecting(i64::MIN, i64::MAX) {
        if !store.contains(&id) {
            return Err(format!("temporal index holds removed {id}"));
        }
    }
    if !store.indexes_consistent() {
        return Err("indexes disagree with a rebuild".into());
    }
    store.check_integrity().map_err(|e| e.to_string())
}

pub fn graph_integrity_suite(builds: usize, seed: u64) -> Outcome {
    let tokenizer = TokenizerConfig::default();
    let mut nodes = 0;
    for b in 0..builds {
        let sources = fuzzed_sources(seed + b as u64);
        let (store, report, _) = build_graph(&sources, &tokenizer).map_err(|e| format!("build {b}: {e}"))?;
        full_scan_integrity(&store).map_err(|e| format!("build {b}: {e}"))?;
        if report.nodes_added() != store.node_count() || report.edges_added() != store.edge_count() {
            return Err(format!("build {b}: report counts disagree with the store"));
        }
        let first = dump_to_string(&store);
        let reloaded = load_from_str(&first).map_err(|e| format!("build {b}: reload failed: {e}"))?;
        full_scan_integrity(&reloaded).map_err(|e| format!("build {b} reloaded: {e}"))?;
        if dump_to_string(&reloaded) != first {
            return Err(format!("build {b}: dump -> load -> dump is not byte-identical"));
        }
        let (again, _, _) = build_graph(&fuzzed_sources(seed + b as u64), &tokenizer).map_err(|e| e.to_string())?;
        if dump_to_string(&again) != first {
            return Err(format!("build {b}: repeated build differs"));
        }
        nodes += store.node_count();
    }
    Ok(format!("{builds} fuzzed builds ({nodes} nodes): integrity holds, dumps byte-identical"))
}
