use std::f64::consts::TAU;

use num_complex::Complex64;

use super::TransportError;
use crate::foliation::Chart;

/// Consecutive segments must meet within this distance (relative to the
/// path's scale).
pub const JOIN_TOL: f64 = 1e-12;

/// A piece of a path in the complex plane, parametrised by `t ∈ [0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Segment {
    Line { from: Complex64, to: Complex64 },
    /// `center + radius·exp(i(start + t·sweep))`; positive sweep is
    /// counterclockwise.
    Arc { center: Complex64, radius: f64, start: f64, sweep: f64 },
}

impl Segment {
    pub fn point(&self, t: f64) -> Complex64 {
        match *self {
            Segment::Line { from, to } => from + (to - from) * t,
            Segment::Arc { center, radius, start, sweep } => center + Complex64::from_polar(radius, start + t * sweep),
        }
    }

    /// `d point / dt`.
    pub fn velocity(&self, t: f64) -> Complex64 {
        match *self {
            Segment::Line { from, to } => to - from,
            Segment::Arc { radius, start, sweep, .. } => {
                Complex64::new(0.0, sweep) * Complex64::from_polar(radius, start + t * sweep)
            }
        }
    }

    pub fn start(&self) -> Complex64 {
        self.point(0.0)
    }

    /// Exact endpoint; full circles return to their start bit-exactly.
    pub fn end(&self) -> Complex64 {
        match *self {
            Segment::Arc { sweep, .. } if (sweep.abs() - TAU).abs() == 0.0 => self.start(),
            _ => self.point(1.0),
        }
    }

    pub fn length(&self) -> f64 {
        match *self {
            Segment::Line { from, to } => (to - from).norm(),
            Segment::Arc { radius, sweep, .. } => radius * sweep.abs(),
        }
    }

    pub fn reversed(&self) -> Segment {
        match *self {
            Segment::Line { from, to } => Segment::Line { from: to, to: from },
            Segment::Arc { center, radius, start, sweep } => Segment::Arc {
                center,
                radius,
                start: start + sweep,
                sweep: -sweep,
            },
        }
    }

    /// Smallest distance from `z` to the segment.
    pub fn distance_to(&self, z: Complex64) -> f64 {
        match *self {
            Segment::Line { from, to } => {
                let d = to - from;
                let len2 = d.norm_sqr();
                let t = if len2 == 0.0 { 0.0 } else { ((z - from) * d.conj()).re / len2 };
                (z - self.point(t.clamp(0.0, 1.0))).norm()
            }
            Segment::Arc { .. } => {
                // Sampled; arcs here are short enough that 512 points suffice
                // for the separation checks they feed.
                (0..=512).map(|i| (z - self.point(i as f64 / 512.0)).norm()).fold(f64::INFINITY, f64::min)
            }
        }
    }
}

/// An oriented path in one coordinate of a chart.
#[derive(Debug, Clone, PartialEq)]
pub struct PathSpec {
    pub chart: Chart,
    pub segments: Vec<Segment>,
}

impl PathSpec {
    pub fn new(chart: Chart, segments: Vec<Segment>) -> Result<Self, TransportError> {
        if segments.is_empty() {
            return Err(TransportError::InvalidPath);
        }
        let scale = segments.iter().map(|s| s.start().norm() + s.length()).fold(1.0, f64::max);
        for w in segments.windows(2) {
            if (w[0].end() - w[1].start()).norm() > JOIN_TOL * scale {
                return Err(TransportError::InvalidPath);
            }
        }
        Ok(Self { chart, segments })
    }

    pub fn line(chart: Chart, from: Complex64, to: Complex64) -> Self {
        Self {
            chart,
            segments: vec![Segment::Line { from, to }],
        }
    }

    /// The circle `|z − center| = radius` once, counterclockwise, from the
    /// angle `start`.
    pub fn circle(chart: Chart, center: Complex64, radius: f64, start: f64) -> Self {
        Self {
            chart,
            segments: vec![Segment::Arc { center, radius, start, sweep: TAU }],
        }
    }

    pub fn start(&self) -> Complex64 {
        self.segments[0].start()
    }

    pub fn end(&self) -> Complex64 {
        self.segments[self.segments.len() - 1].end()
    }

    pub fn is_closed(&self) -> bool {
        self.start() == self.end()
    }

    pub fn length(&self) -> f64 {
        self.segments.iter().map(Segment::length).sum()
    }

    pub fn reversed(&self) -> Self {
        Self {
            chart: self.chart,
            segments: self.segments.iter().rev().map(Segment::reversed).collect(),
        }
    }

    /// `self` followed by `other`.
    pub fn concat(&self, other: &PathSpec) -> Result<Self, TransportError> {
        if self.chart != other.chart {
            return Err(TransportError::InvalidPath);
        }
        let mut segments = self.segments.clone();
        segments.extend_from_slice(&other.segments);
        Self::new(self.chart, segments)
    }

    pub fn distance_to(&self, z: Complex64) -> f64 {
        self.segments.iter().map(|s| s.distance_to(z)).fold(f64::INFINITY, f64::min)
    }
}
