//! Synthetic corpora and brute-force oracles shared by the integration
//! tests. Oracles work on the generated records, never on the graph.
#![allow(dead_code)]

pub mod checks;

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use vesa_core::geo::{BoundingBox, SpatialExtent};
use vesa_core::ingest::{AuthorRef, NormalizedDataset, ParsedSource, RecordKind, SourceConfig, TemporalCoverage};
use vesa_core::query::{Catalog, QueryOptions, SelectionState};
use vesa_core::semantics::TokenizerConfig;
use vesa_core::{build_graph, BuildReport, GraphStore, TimeRange, Timestamp};

pub const KEYWORDS: [&str; 24] = [
    "temperature", "climate", "precipitation", "salinity", "sea ice", "ocean", "aerosol", "permafrost",
    "flood events", "river discharge", "chlorophyll", "soil moisture", "snow cover", "glacier", "wind",
    "albedo", "carbon flux", "ozone", "sediment", "foraminifera", "plankton", "bathymetry", "land cover",
    "radar backscatter",
];

/// Title words; disjoint from [`KEYWORDS`] and its parts.
pub const TITLE_WORDS: [&str; 20] = [
    "station", "record", "survey", "profile", "campaign", "gridded", "daily", "monthly", "annual",
    "reanalysis", "mooring", "transect", "expedition", "composite", "mosaic", "archive", "network",
    "baseline", "inventory", "series",
];

pub const CORPORA: [&str; 3] = ["pangaea", "dlr", "gfz"];

const FIRST: [&str; 8] = ["Alice", "Bob", "Carol", "Dan", "Erin", "Franziska", "Gustav", "Hana"];
const LAST: [&str; 8] = ["Smith", "Jones", "White", "Brown", "Green", "Tell", "Berg", "Sato"];

#[derive(Clone, Debug)]
pub struct Location {
    pub west: f64,
    pub south: f64,
    pub east: f64,
    pub north: f64,
    pub mean: Option<(f64, f64)>,
}

#[derive(Clone, Debug)]
pub struct SynthDataset {
    pub key: String,
    pub corpus: &'static str,
    pub title: String,
    pub keywords: Vec<String>,
    pub authors: Vec<String>,
    /// `YYYY-MM-DDT00:00:00Z` strings; `None` is an open end.
    pub coverage: Option<(Option<String>, Option<String>)>,
    pub location: Option<Location>,
}

fn date(rng: &mut impl Rng) -> String {
    format!("{:04}-{:02}-{:02}T00:00:00Z", rng.gen_range(1950..2025), rng.gen_range(1..=12), rng.gen_range(1..=28))
}

fn location(rng: &mut impl Rng) -> Location {
    let south: f64 = rng.gen_range(-80.0..70.0);
    let north = (south + rng.gen_range(0.0..15.0)).min(90.0);
    let west: f64 = rng.gen_range(-180.0..180.0);
    // one in eight boxes crosses the antimeridian
    let east = if rng.gen_ratio(1, 8) {
        -180.0 + rng.gen_range(0.0..20.0)
    } else {
        (west + rng.gen_range(0.0..30.0)).min(180.0)
    };
    let mean = rng.gen_ratio(1, 3).then(|| (rng.gen_range(south..=north), rng.gen_range(-180.0..180.0)));
    Location { west, south, east, north, mean }
}

pub fn synth_datasets(n: usize, seed: u64) -> Vec<SynthDataset> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|i| {
            let title_len = rng.gen_range(2..6);
            let title: Vec<&str> = (0..title_len).map(|_| *TITLE_WORDS.choose(&mut rng).unwrap()).collect();
            let keyword_count = rng.gen_range(0..5);
            let mut keywords: Vec<String> = KEYWORDS
                .choose_multiple(&mut rng, keyword_count)
                .map(|k| k.to_string())
                .collect();
            keywords.sort();
            let authors: Vec<String> = (0..rng.gen_range(0..4))
                .map(|_| format!("{} {}", FIRST.choose(&mut rng).unwrap(), LAST.choose(&mut rng).unwrap()))
                .collect();
            let coverage = match rng.gen_range(0..10) {
                0 => None,
                1 => Some((None, Some(date(&mut rng)))),
                2 => Some((Some(date(&mut rng)), None)),
                _ => {
                    let (a, b) = (date(&mut rng), date(&mut rng));
                    Some(if a <= b { (Some(a), Some(b)) } else { (Some(b), Some(a)) })
                }
            };
            SynthDataset {
                key: format!("{:06}", i + 1),
                corpus: CORPORA[rng.gen_range(0..CORPORA.len())],
                title: title.join(" "),
                keywords,
                authors,
                coverage,
                location: rng.gen_ratio(4, 5).then(|| location(&mut rng)),
            }
        })
        .collect()
}

pub fn to_record(d: &SynthDataset) -> NormalizedDataset {
    let mut record = NormalizedDataset::new(RecordKind::Dataset, &d.key, "SYNTH", &d.title);
    record.keywords = d.keywords.clone();
    record.authors = d.authors.iter().filter_map(|a| AuthorRef::new(a, None)).collect();
    record.temporal_coverage = d.coverage.as_ref().and_then(|(s, e)| {
        let ts = |v: &Option<String>| v.as_deref().map(|t| Timestamp::parse(t).unwrap());
        TemporalCoverage::new(ts(s), ts(e)).unwrap()
    });
    record.location = d.location.as_ref().map(|l| SpatialExtent {
        west_bound_longitude: l.west,
        east_bound_longitude: l.east,
        north_bound_latitude: l.north,
        south_bound_latitude: l.south,
        mean_latitude: l.mean.map(|m| m.0),
        mean_longitude: l.mean.map(|m| m.1),
    });
    record
}

pub fn source(name: &str) -> SourceConfig {
    serde_json::from_value(json!({"name": name, "kind": "pangaea"})).unwrap()
}

pub fn parsed_sources(datasets: &[SynthDataset]) -> Vec<(SourceConfig, ParsedSource)> {
    let mut by_corpus: BTreeMap<&str, Vec<NormalizedDataset>> = BTreeMap::new();
    for d in datasets {
        by_corpus.entry(d.corpus).or_default().push(to_record(d));
    }
    by_corpus
        .into_iter()
        .map(|(name, datasets)| {
            let documents_seen = datasets.len();
            (source(name), ParsedSource { datasets, documents_seen, ..Default::default() })
        })
        .collect()
}

pub fn build_store(datasets: &[SynthDataset]) -> (GraphStore, BuildReport) {
    let (store, report, _) = build_graph(&parsed_sources(datasets), &TokenizerConfig::default()).unwrap();
    (store, report)
}

pub fn build_catalog(datasets: &[SynthDataset]) -> Catalog {
    let (store, _) = build_store(datasets);
    Catalog::new(store, &TokenizerConfig::default(), QueryOptions::default()).unwrap()
}

pub fn dataset_node_id(key: &str) -> String {
    format!("Dataset/{key}")
}

/// Author id as the service spells it: lowercase words joined by `-`.
pub fn author_node_id(name: &str) -> String {
    let slug: Vec<String> = name.split_whitespace().map(str::to_lowercase).collect();
    format!("Author/{}", slug.join("-"))
}

pub fn random_selection(rng: &mut impl Rng, datasets: &[SynthDataset]) -> SelectionState {
    let mut selection = SelectionState::overview();
    let used_keywords: BTreeSet<&str> = datasets.iter().flat_map(|d| d.keywords.iter().map(String::as_str)).collect();
    let used_keywords: Vec<&str> = used_keywords.into_iter().collect();
    let count = rng.gen_range(0..3);
    for k in used_keywords.choose_multiple(rng, count) {
        selection.keywords.push(k.to_string());
    }
    if rng.gen_bool(0.5) {
        let (a, b) = (date(rng), date(rng));
        let (start, end) = if a <= b { (a, b) } else { (b, a) };
        selection.time_range = Some(TimeRange { start: Timestamp::parse(&start).unwrap(), end: Timestamp::parse(&end).unwrap() });
    }
    if rng.gen_bool(0.4) {
        let south: f64 = rng.gen_range(-90.0..60.0);
        let north = (south + rng.gen_range(5.0..80.0)).min(90.0);
        let west: f64 = rng.gen_range(-180.0..180.0);
        let east = if rng.gen_ratio(1, 5) { rng.gen_range(-180.0..=west) } else { (west + rng.gen_range(10.0..200.0)).min(180.0) };
        selection.spatial_box = Some(BoundingBox { west, south, east, north });
    }
    if rng.gen_bool(0.3) {
        let authors: BTreeSet<&String> = datasets.iter().flat_map(|d| &d.authors).collect();
        let authors: Vec<&String> = authors.into_iter().collect();
        let count = rng.gen_range(1..3);
        for a in authors.choose_multiple(rng, count) {
            selection.authors.push(author_node_id(a));
        }
    }
    if rng.gen_bool(0.3) {
        selection.sources.push(CORPORA.choose(rng).unwrap().to_string());
    }
    selection
}

fn display_point(l: &Location) -> (f64, f64) {
    if let Some(mean) = l.mean {
        return mean;
    }
    let lat = (l.south + l.north) / 2.0;
    let lon = if l.west <= l.east {
        (l.west + l.east) / 2.0
    } else {
        let mid = l.west + (l.east + 360.0 - l.west) / 2.0;
        if mid > 180.0 { mid - 360.0 } else { mid }
    };
    (lat, lon)
}

fn in_box(b: &BoundingBox, (lat, lon): (f64, f64)) -> bool {
    let lon_ok = if b.west <= b.east { b.west <= lon && lon <= b.east } else { lon >= b.west || lon <= b.east };
    b.south <= lat && lat <= b.north && lon_ok
}

/// Linear scan over the generated records.
pub fn oracle_filter(datasets: &[SynthDataset], selection: &SelectionState) -> BTreeSet<String> {
    datasets
        .iter()
        .filter(|d| {
            let terms: BTreeSet<String> = d
                .keywords
                .iter()
                .cloned()
                .chain(d.title.split(' ').map(str::to_lowercase))
                .collect();
            selection.keywords.iter().all(|k| terms.contains(&k.to_lowercase()))
        })
        .filter(|d| match &selection.time_range {
            None => true,
            Some(range) => match &d.coverage {
                None => false,
                Some((start, end)) => {
                    let (lo, hi) = (range.start.as_str(), range.end.as_str());
                    start.as_deref().is_none_or(|s| s <= hi) && end.as_deref().is_none_or(|e| e >= lo)
                }
            },
        })
        .filter(|d| match &selection.spatial_box {
            None => true,
            Some(b) => d.location.as_ref().is_some_and(|l| in_box(b, display_point(l))),
        })
        .filter(|d| selection.authors.is_empty() || d.authors.iter().any(|a| selection.authors.contains(&author_node_id(a))))
        .filter(|d| selection.sources.is_empty() || selection.sources.iter().any(|s| s == d.corpus))
        .map(|d| dataset_node_id(&d.key))
        .collect()
}

/// Brute-force TF-IDF: `max over documents of count(t, d) * ln(N / df(t))`.
pub fn oracle_tfidf(documents: &[Vec<String>]) -> BTreeMap<String, (f64, usize)> {
    let n = documents.len() as f64;
    let vocabulary: BTreeSet<&String> = documents.iter().flatten().collect();
    vocabulary
        .into_iter()
        .map(|term| {
            let df = documents.iter().filter(|d| d.contains(term)).count();
            let idf = (n / df as f64).ln();
            let best = documents
                .iter()
                .map(|d| d.iter().filter(|t| *t == term).count() as f64 * idf)
                .fold(0.0, f64::max);
            (term.clone(), (best, df))
        })
        .collect()
}

pub fn relative_error(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}
