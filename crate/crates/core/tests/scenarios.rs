mod common;

use std::collections::BTreeSet;

use common::checks::{demo_catalog, terrasarx_scenario};
use common::{build_catalog, synth_datasets};
use serde_json::{json, Value};
use vesa_core::query::{BinUnit, Page, SelectionState, MAX_BINS};
use vesa_core::{NodeId, QueryError, TimeRange, Timestamp};

fn listing_record() -> Value {
    json!({
        "id": "Dataset/495977132",
        "location_data": {
            "west_bound_longitude": -58.0365,
            "east_bound_longitude": -45.688,
            "north_bound_latitude": 61.4639,
            "south_bound_latitude": 50.208,
            "mean_latitude": 56.62752222222233,
            "mean_longitude": -50.69916666666666
        },
        "doi": "https://doi.org/10.1594/PANGAEA.958142",
        "dataset_publication_date": "2023-11-13T06:33:47+00:00",
        "temporal_coverage": {
            "start_date": "1999-07-31T23:00:00Z",
            "end_date": "1999-08-01T23:00:00.000Z"
        },
        "authors": ["Franziska Tell"],
        "dataset_title": "Individual shell sizes and shell weights of planktonic foraminifera from five samples from the Labrador Sea cores HU2008-029-004TWC, HU91-045-93BX and MD99-2227",
        "organization": "PANGAEA"
    })
}

#[test]
fn listing_record_survives_ingest() {
    let catalog = demo_catalog();
    let records = serde_json::to_value(catalog.main_records()).unwrap();
    let record = records["result"]
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["id"] == "Dataset/495977132")
        .unwrap();
    assert_eq!(record, &listing_record());
    assert_eq!(record["location_data"]["mean_latitude"].as_f64(), Some(56.62752222222233));
    assert_eq!(records["result"].as_array().unwrap().len(), catalog.dataset_count());
}

#[test]
fn listing_time_and_map() {
    let catalog = demo_catalog();
    let range = TimeRange {
        start: Timestamp::parse("1999-07-01T00:00:00Z").unwrap(),
        end: Timestamp::parse("1999-09-01T00:00:00Z").unwrap(),
    };
    let hits = catalog.datasets_in_range(&range).unwrap();
    assert!(hits.result.iter().any(|r| r.id.as_str() == "Dataset/495977132"));
    let before = TimeRange {
        start: Timestamp::parse("1700-01-01T00:00:00Z").unwrap(),
        end: Timestamp::parse("1700-01-02T00:00:00Z").unwrap(),
    };
    assert!(catalog.datasets_in_range(&before).unwrap().result.is_empty());

    let all = catalog.evaluate(&SelectionState::overview()).unwrap();
    let points = catalog.map_points(&all);
    let listing = points.iter().find(|p| p.dataset_id.as_str() == "Dataset/495977132").unwrap();
    assert_eq!((listing.lat, listing.lon), (56.62752222222233, -50.69916666666666));
}

#[test]
fn terrasarx_reached_through_publication() {
    println!("{}", terrasarx_scenario().unwrap());
}

#[test]
fn temperature_refinement() {
    let catalog = demo_catalog();
    let detail = catalog.keyword_detail("Temperature").unwrap();
    let related: BTreeSet<&str> = detail.related.iter().map(|r| r.term.as_str()).collect();
    assert!(related.contains("climate") && related.contains("precipitation"));

    let temperature = SelectionState::overview().with_keyword("temperature");
    let broad = catalog.evaluate(&temperature).unwrap();
    let narrow = catalog.evaluate(&temperature.clone().with_keyword("precipitation")).unwrap();
    assert!(narrow.total < broad.total);
    assert!(narrow.dataset_ids.iter().all(|id| broad.dataset_ids.contains(id)));

    let chord = catalog.coauthor_matrix(&narrow);
    let n = chord.authors.len();
    assert!(n >= 2);
    for i in 0..n {
        assert_eq!(chord.matrix[i][i], 0);
        for j in 0..n {
            assert_eq!(chord.matrix[i][j], chord.matrix[j][i]);
        }
    }
    // the related cloud of the selection excludes the selected terms
    let cloud = catalog.keyword_cloud(&broad, &temperature.keywords, 100);
    assert!(cloud.iter().all(|e| e.term != "temperature" && e.related && e.weight > 0));
    assert!(cloud.iter().any(|e| e.term == "climate"));
}

#[test]
fn chord_counts_shared_datasets() {
    let datasets = synth_datasets(300, 21);
    let catalog = build_catalog(&datasets);
    let all = catalog.evaluate(&SelectionState::overview()).unwrap();
    let chord = catalog.coauthor_matrix(&all);
    let slug = |n: &str| format!("Author/{}", n.split_whitespace().map(str::to_lowercase).collect::<Vec<_>>().join("-"));
    for (i, a) in chord.authors.iter().enumerate() {
        for (j, b) in chord.authors.iter().enumerate() {
            let expected = if i == j {
                0
            } else {
                datasets
                    .iter()
                    .filter(|d| {
                        let ids: BTreeSet<String> = d.authors.iter().map(|n| slug(n)).collect();
                        ids.contains(a.id.as_str()) && ids.contains(b.id.as_str())
                    })
                    .count() as u32
            };
            assert_eq!(chord.matrix[i][j], expected, "{} / {}", a.id, b.id);
        }
    }
    assert!(chord.authors.windows(2).all(|w| w[0].name <= w[1].name));
}

#[test]
fn histogram_matches_bin_scan() {
    let datasets = synth_datasets(400, 8);
    let catalog = build_catalog(&datasets);
    let selection = SelectionState::overview().with_source("pangaea");
    let result = catalog.evaluate(&selection).unwrap();
    let (lo, hi) = catalog.temporal_axis().unwrap();
    for unit in [BinUnit::Year, BinUnit::Month] {
        let histogram = catalog.temporal_histogram(&result, unit).unwrap();
        assert!(histogram.bins.first().unwrap().bin_start.micros() <= lo);
        assert!(histogram.bins.last().unwrap().bin_end.micros() > hi);
        for bin in &histogram.bins {
            let (start, end) = (bin.bin_start.micros(), bin.bin_end.micros());
            let expected = result
                .dataset_ids
                .iter()
                .filter_map(|id| catalog.dataset(id).unwrap().coverage)
                .filter(|&(s, e)| s.max(lo) < end && e.min(hi) >= start)
                .count();
            assert_eq!(bin.count, expected, "{unit:?} bin {}", bin.bin_start);
        }
        let undated = result.dataset_ids.iter().filter(|id| catalog.dataset(id).unwrap().coverage.is_none()).count();
        assert_eq!(histogram.undated, undated);
    }
    assert!(matches!(
        catalog.temporal_histogram(&result, BinUnit::Day),
        Ok(_) | Err(QueryError::TooManyBins { max: MAX_BINS, .. })
    ));
}

#[test]
fn list_rows_page_and_abstract() {
    let catalog = demo_catalog();
    let all = catalog.evaluate(&SelectionState::overview()).unwrap();
    let full = catalog.dataset_list(&all, None, Page::default()).unwrap();
    assert_eq!(full.rows.len(), all.total);
    assert!(full.rows.windows(2).all(|w| w[0].title <= w[1].title));
    let page = catalog.dataset_list(&all, None, Page { offset: 2, limit: Some(3) }).unwrap();
    assert_eq!(page.rows, full.rows[2..5]);
    assert_eq!(page.total, all.total);

    let id = NodeId::parse("Dataset/900001").unwrap();
    let with_abstract = catalog.dataset_list(&all, Some(&id), Page { offset: 0, limit: Some(0) }).unwrap();
    assert!(with_abstract.abstract_record.unwrap().abstract_text.starts_with("Station record"));
    let missing = NodeId::parse("Dataset/nope").unwrap();
    assert!(matches!(catalog.abstract_record(&missing), Err(QueryError::UnknownDataset(_))));
}

#[test]
fn overview_cloud_is_top_k() {
    let catalog = demo_catalog();
    let all = catalog.evaluate(&SelectionState::overview()).unwrap();
    let cloud = catalog.keyword_cloud(&all, &[], 5);
    assert_eq!(cloud.len(), 5);
    let top = catalog.cloud_records(5).unwrap();
    let terms: Vec<&str> = top.iter().map(|r| r.keyword.as_str()).collect();
    assert_eq!(cloud.iter().map(|e| e.term.as_str()).collect::<Vec<_>>(), terms);
    assert!(top.windows(2).all(|w| w[0].score >= w[1].score));
    let everything = catalog.cloud_records(100_000).unwrap();
    assert_eq!(everything.len(), catalog.scores().len());
}
