use std::collections::BTreeSet;
use std::io::{BufRead, Write};

use crate::error::{Error, Result};

/// Contents held by each cache.
///
/// Caches and contents are 0-based here; the text format written by
/// [`PlacementPlan::write_text`] lists contents 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlacementPlan {
    n: usize,
    k_tilde: usize,
    cache_contents: Vec<Vec<usize>>,
    replicas: Vec<usize>,
    holders: Vec<Vec<u32>>,
}

impl PlacementPlan {
    /// Validates and indexes an explicit cache → contents layout.
    pub fn from_cache_contents(
        n: usize,
        k_tilde: usize,
        cache_contents: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let mut replicas = vec![0usize; n];
        let mut holders = vec![Vec::new(); n];
        for (cache, contents) in cache_contents.iter().enumerate() {
            if contents.len() > k_tilde {
                return Err(Error::InvalidConfiguration(format!(
                    "cache {} stores {} contents, more than k_tilde = {k_tilde}",
                    cache + 1,
                    contents.len()
                )));
            }
            for &c in contents {
                if c >= n {
                    return Err(Error::InvalidConfiguration(format!(
                        "cache {} stores content {} outside catalog of {n}",
                        cache + 1,
                        c + 1
                    )));
                }
                if holders[c].last() == Some(&(cache as u32)) {
                    return Err(Error::InvalidConfiguration(format!(
                        "cache {} stores content {} twice",
                        cache + 1,
                        c + 1
                    )));
                }
                replicas[c] += 1;
                holders[c].push(cache as u32);
            }
        }
        Ok(PlacementPlan {
            n,
            k_tilde,
            cache_contents,
            replicas,
            holders,
        })
    }

    /// Nothing stored anywhere.
    pub fn empty(n: usize, m: usize, k_tilde: usize) -> Self {
        PlacementPlan {
            n,
            k_tilde,
            cache_contents: vec![Vec::new(); m],
            replicas: vec![0; n],
            holders: vec![Vec::new(); n],
        }
    }

    /// Lays copies out round-robin: copies ordered by content index, the
    /// copy ranked `r` (0-based) goes to cache `r mod m`.
    ///
    /// Counts above `m` are capped at `m` first so no cache receives the same
    /// content twice.
    pub fn round_robin(n: usize, m: usize, k_tilde: usize, replicas: &[usize]) -> Result<Self> {
        if replicas.len() != n {
            return Err(Error::InvalidParameter(format!(
                "{} replica counts for a catalog of {n}",
                replicas.len()
            )));
        }
        if m == 0 {
            return Err(Error::InvalidConfiguration("m must be at least 1".into()));
        }
        let capped: Vec<usize> = replicas
            .iter()
            .enumerate()
            .map(|(i, &r)| {
                if r > m {
                    log::warn!("content {} asks for {r} copies; capped at m = {m}", i + 1);
                }
                r.min(m)
            })
            .collect();
        let total: usize = capped.iter().sum();
        if total > m * k_tilde {
            return Err(Error::InvalidConfiguration(format!(
                "{total} copies exceed total capacity m * k_tilde = {}",
                m * k_tilde
            )));
        }
        let mut caches = vec![Vec::new(); m];
        let mut rank = 0usize;
        for (content, &copies) in capped.iter().enumerate() {
            for _ in 0..copies {
                caches[rank % m].push(content);
                rank += 1;
            }
        }
        Self::from_cache_contents(n, k_tilde, caches)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.cache_contents.len()
    }

    pub fn k_tilde(&self) -> usize {
        self.k_tilde
    }

    /// Copies of each content.
    pub fn replicas(&self) -> &[usize] {
        &self.replicas
    }

    pub fn cache_contents(&self) -> &[Vec<usize>] {
        &self.cache_contents
    }

    /// Caches storing `content`, ascending.
    pub fn holders(&self, content: usize) -> &[u32] {
        &self.holders[content]
    }

    /// Contents with at least one copy.
    pub fn cached_set(&self) -> BTreeSet<usize> {
        (0..self.n).filter(|&i| self.replicas[i] > 0).collect()
    }

    pub fn total_copies(&self) -> usize {
        self.replicas.iter().sum()
    }

    /// Header `n m k_tilde`, then one line per cache with its 1-based
    /// content indices separated by single spaces.
    pub fn write_text<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "{} {} {}", self.n, self.m(), self.k_tilde)?;
        for contents in &self.cache_contents {
            let line: Vec<String> = contents.iter().map(|c| (c + 1).to_string()).collect();
            writeln!(out, "{}", line.join(" "))?;
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut buf = Vec::new();
        self.write_text(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("plan text is ASCII")
    }

    pub fn read_text<R: BufRead>(input: R) -> Result<Self> {
        let mut lines = input.lines();
        let header = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "missing header".into(),
        })??;
        let fields: Vec<usize> = header
            .split_whitespace()
            .map(|f| f.parse::<usize>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Parse {
                line: 1,
                msg: format!("header: {e}"),
            })?;
        let [n, m, k_tilde] = fields[..] else {
            return Err(Error::Parse {
                line: 1,
                msg: "header must read `n m k_tilde`".into(),
            });
        };
        let mut caches = Vec::with_capacity(m);
        for (idx, line) in lines.enumerate() {
            let line = line?;
            let lineno = idx + 2;
            if caches.len() == m {
                if line.trim().is_empty() {
                    continue;
                }
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("more than {m} cache lines"),
                });
            }
            let contents = line
                .split_whitespace()
                .map(|f| match f.parse::<usize>() {
                    Ok(c) if c >= 1 => Ok(c - 1),
                    _ => Err(Error::Parse {
                        line: lineno,
                        msg: format!("bad content index `{f}`"),
                    }),
                })
                .collect::<Result<Vec<_>>>()?;
            caches.push(contents);
        }
        if caches.len() != m {
            return Err(Error::Parse {
                line: caches.len() + 2,
                msg: format!("expected {m} cache lines, found {}", caches.len()),
            });
        }
        Self::from_cache_contents(n, k_tilde, caches)
    }
}
