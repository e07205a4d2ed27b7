use std::collections::HashMap;
use std::io::BufRead;
use std::path::Path;

use super::{Edge, PreferenceDag};
use crate::{Error, Result};

/// Thresholds applied when building the preference graph from ratings.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MovielensFilter {
    pub min_user_ratings: usize,
    pub max_user_ratings: usize,
    pub min_movie_ratings: usize,
    /// Added to the denominators of every weight.
    pub smoothing: f64,
}

impl Default for MovielensFilter {
    fn default() -> Self {
        MovielensFilter {
            min_user_ratings: 20,
            max_user_ratings: 50,
            min_movie_ratings: 1000,
            smoothing: 20.0,
        }
    }
}

#[derive(Clone, Debug)]
pub struct MovielensData {
    pub dag: PreferenceDag,
    /// Retained users that rated at least one retained movie.
    pub users: usize,
    /// Original movie ids, in vertex order (earliest first).
    pub movie_ids: Vec<u64>,
    /// `N_i`, the number of retained users who rated each vertex.
    pub raters: Vec<usize>,
}

struct Rating {
    user: u64,
    movie: u64,
    time: u64,
}

fn parse_line(line: &str, lineno: usize) -> Result<Rating> {
    let bad = |reason: String| Error::MalformedRecord {
        line: lineno,
        reason,
    };
    let fields: Vec<&str> = line.split("::").collect();
    if fields.len() != 4 {
        return Err(bad(format!(
            "expected 4 `::`-separated fields, got {}",
            fields.len()
        )));
    }
    let num = |i: usize, name: &str| {
        fields[i]
            .trim()
            .parse::<u64>()
            .map_err(|_| bad(format!("{name} `{}` is not an integer", fields[i])))
    };
    let user = num(0, "user id")?;
    let movie = num(1, "movie id")?;
    num(2, "rating")?;
    let time = num(3, "time stamp")?;
    Ok(Rating { user, movie, time })
}

/// Builds the complete preference DAG from a `UserID::MovieID::Rating::Timestamp` stream.
///
/// Users are filtered on their raw rating counts, then movies on the ratings left by retained
/// users. Movies are ordered by their earliest retained rating (ties by id). Edge `i → j` gets
/// `N_ij / (N_i + c)` where `N_ij` counts users who rated `i` strictly before `j`, and the
/// self-loop of `i` gets `N_i / (U + c)`.
pub fn load_movielens<R: BufRead>(reader: R, filter: &MovielensFilter) -> Result<MovielensData> {
    let mut ratings = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.is_empty() {
            continue;
        }
        ratings.push(parse_line(&line, i + 1)?);
    }
    if ratings.is_empty() {
        return Err(Error::EmptyResult { what: "rating" });
    }

    let mut per_user: HashMap<u64, usize> = HashMap::new();
    for r in &ratings {
        *per_user.entry(r.user).or_default() += 1;
    }
    let keep_user =
        |u: u64| (filter.min_user_ratings..=filter.max_user_ratings).contains(&per_user[&u]);
    ratings.retain(|r| keep_user(r.user));

    let mut per_movie: HashMap<u64, usize> = HashMap::new();
    for r in &ratings {
        *per_movie.entry(r.movie).or_default() += 1;
    }
    ratings.retain(|r| per_movie[&r.movie] >= filter.min_movie_ratings);
    if ratings.is_empty() {
        return Err(Error::EmptyResult { what: "movie" });
    }

    let mut first_seen: HashMap<u64, u64> = HashMap::new();
    for r in &ratings {
        let t = first_seen.entry(r.movie).or_insert(r.time);
        *t = (*t).min(r.time);
    }
    let mut movie_ids: Vec<u64> = first_seen.keys().copied().collect();
    movie_ids.sort_unstable_by_key(|m| (first_seen[m], *m));
    let vertex: HashMap<u64, usize> = movie_ids.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let n = movie_ids.len();

    // Per user: earliest time stamp for each movie they rated.
    let mut history: HashMap<u64, HashMap<usize, u64>> = HashMap::new();
    for r in &ratings {
        let t = history
            .entry(r.user)
            .or_default()
            .entry(vertex[&r.movie])
            .or_insert(r.time);
        *t = (*t).min(r.time);
    }
    let users = history.len();

    let mut raters = vec![0usize; n];
    let mut before = vec![0usize; n * n];
    let mut seen: Vec<(usize, u64)> = Vec::new();
    for rated in history.values() {
        seen.clear();
        seen.extend(rated.iter().map(|(&v, &t)| (v, t)));
        for &(a, ta) in &seen {
            raters[a] += 1;
            for &(b, tb) in &seen {
                if ta < tb {
                    before[a * n + b] += 1;
                }
            }
        }
    }

    let c = filter.smoothing;
    let mut edges = Vec::with_capacity(n * (n + 1) / 2);
    for i in 0..n {
        edges.push(Edge {
            src: i,
            dst: i,
            weight: raters[i] as f64 / (users as f64 + c),
        });
        for j in i + 1..n {
            let w = before[i * n + j] as f64 / (raters[i] as f64 + c);
            edges.push(Edge {
                src: i,
                dst: j,
                weight: w.min(1.0),
            });
        }
    }
    let dag = PreferenceDag::new(n, edges)?;
    Ok(MovielensData {
        dag,
        users,
        movie_ids,
        raters,
    })
}

pub fn load_movielens_path(path: &Path, filter: &MovielensFilter) -> Result<MovielensData> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    load_movielens(std::io::BufReader::new(file), filter)
}
