//! Spatial extents, display points and selection boxes.

use serde::{Deserialize, Serialize};

use crate::error::FieldError;
use crate::scalar::Scalar;

/// Bounding box of a dataset as published by the source, in degrees.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpatialExtent {
    pub west_bound_longitude: f64,
    pub east_bound_longitude: f64,
    pub north_bound_latitude: f64,
    pub south_bound_latitude: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mean_latitude: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mean_longitude: Option<f64>,
}

impl SpatialExtent {
    pub fn from_bbox(west: f64, south: f64, east: f64, north: f64) -> Result<Self, FieldError> {
        let extent = Self {
            west_bound_longitude: west,
            east_bound_longitude: east,
            north_bound_latitude: north,
            south_bound_latitude: south,
            mean_latitude: None,
            mean_longitude: None,
        };
        extent.validate()?;
        Ok(extent)
    }

    pub fn validate(&self) -> Result<(), FieldError> {
        check_longitude("west_bound_longitude", self.west_bound_longitude)?;
        check_longitude("east_bound_longitude", self.east_bound_longitude)?;
        check_latitude("north_bound_latitude", self.north_bound_latitude)?;
        check_latitude("south_bound_latitude", self.south_bound_latitude)?;
        if self.south_bound_latitude > self.north_bound_latitude {
            return Err(FieldError::new(
                "location_data",
                format!(
                    "south bound {} exceeds north bound {}",
                    self.south_bound_latitude, self.north_bound_latitude
                ),
            ));
        }
        if let Some(lat) = self.mean_latitude {
            check_latitude("mean_latitude", lat)?;
        }
        if let Some(lon) = self.mean_longitude {
            check_longitude("mean_longitude", lon)?;
        }
        Ok(())
    }

    /// Point used to draw the dataset on the map: the source-provided mean
    /// when present, otherwise the bounding-box midpoint.
    pub fn display_point(&self) -> GeoPoint {
        let (mid_lat, mid_lon) = bbox_midpoint(
            self.west_bound_longitude,
            self.south_bound_latitude,
            self.east_bound_longitude,
            self.north_bound_latitude,
        );
        GeoPoint {
            lat: self.mean_latitude.unwrap_or(mid_lat),
            lon: self.mean_longitude.unwrap_or(mid_lon),
        }
    }
}

fn check_latitude(field: &str, value: f64) -> Result<(), FieldError> {
    if !value.is_finite() || !(-90.0..=90.0).contains(&value) {
        return Err(FieldError::new(field, format!("latitude {value} outside [-90, 90]")));
    }
    Ok(())
}

fn check_longitude(field: &str, value: f64) -> Result<(), FieldError> {
    if !value.is_finite() || !(-180.0..=180.0).contains(&value) {
        return Err(FieldError::new(field, format!("longitude {value} outside [-180, 180]")));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeoPoint {
    pub lat: f64,
    pub lon: f64,
}

/// Midpoint `(lat, lon)` of a box. A box with `west > east` crosses the
/// antimeridian and its longitude midpoint is taken along the eastward span.
pub fn bbox_midpoint<S: Scalar>(west: S, south: S, east: S, north: S) -> (S, S) {
    let two = S::one() + S::one();
    let full = S::from_f64_lossy(360.0);
    let half = S::from_f64_lossy(180.0);
    let lat = (south + north) / two;
    let lon = if west <= east {
        (west + east) / two
    } else {
        let mid = west + (east + full - west) / two;
        if mid > half {
            mid - full
        } else {
            mid
        }
    };
    (lat, lon)
}

/// Whether `lon` lies within the eastward span `[west, east]`, wrapping when
/// `west > east`.
pub fn longitude_within<S: Scalar>(lon: S, west: S, east: S) -> bool {
    if west <= east {
        west <= lon && lon <= east
    } else {
        lon >= west || lon <= east
    }
}

/// Rectangular selection on the map, in degrees.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundingBox {
    pub west: f64,
    pub south: f64,
    pub east: f64,
    pub north: f64,
}

impl BoundingBox {
    pub fn validate(&self) -> Result<(), FieldError> {
        check_longitude("spatial_box.west", self.west)?;
        check_longitude("spatial_box.east", self.east)?;
        check_latitude("spatial_box.south", self.south)?;
        check_latitude("spatial_box.north", self.north)?;
        if self.south > self.north {
            return Err(FieldError::new(
                "spatial_box",
                format!("south {} exceeds north {}", self.south, self.north),
            ));
        }
        Ok(())
    }

    pub fn contains(&self, point: GeoPoint) -> bool {
        self.south <= point.lat
            && point.lat <= self.north
            && longitude_within(point.lon, self.west, self.east)
    }

    /// Whether the box and a dataset extent overlap (used in bbox filter mode).
    pub fn intersects_extent(&self, extent: &SpatialExtent) -> bool {
        if extent.north_bound_latitude < self.south || extent.south_bound_latitude > self.north {
            return false;
        }
        let spans = |w: f64, e: f64| -> Vec<(f64, f64)> {
            if w <= e {
                vec![(w, e)]
            } else {
                vec![(w, 180.0), (-180.0, e)]
            }
        };
        let mine = spans(self.west, self.east);
        let theirs = spans(extent.west_bound_longitude, extent.east_bound_longitude);
        mine.iter()
            .any(|&(a0, a1)| theirs.iter().any(|&(b0, b1)| a0 <= b1 && b0 <= a1))
    }
}
