//! Dominance, diagonal and horizontal links, and the text picture of the band.

use crate::gene::{Symbol, Symbols};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    A,
    B,
}

impl Letter {
    pub fn symbol(self) -> Symbol {
        match self {
            Letter::A => Symbol::A,
            Letter::B => Symbol::B,
        }
    }
    pub fn other(self) -> Letter {
        match self {
            Letter::A => Letter::B,
            Letter::B => Letter::A,
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Letter::A => "A",
            Letter::B => "B",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LinkKind {
    /// joins `X_i` and `X_{i+f+1}`
    TopDown,
    /// joins `X_{i+f}` and `X_{i+1}`
    BottomUp,
}

impl LinkKind {
    pub fn as_str(self) -> &'static str {
        match self {
            LinkKind::TopDown => "top-down",
            LinkKind::BottomUp => "bottom-up",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DiagonalLink {
    pub kind: LinkKind,
    /// the gap between columns `column` and `column + 1 (mod f)`
    pub column: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Row {
    Top,
    Bottom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HorizontalLink {
    pub row: Row,
    pub column: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decoration {
    /// `None` when no couple determines a dominant letter
    pub dominance: Option<Vec<Letter>>,
    pub diagonal_links: Vec<DiagonalLink>,
    pub horizontal_links: Vec<HorizontalLink>,
}

impl Decoration {
    pub fn has(&self, column: usize, kind: LinkKind) -> bool {
        self.diagonal_links.iter().any(|l| l.column == column && l.kind == kind)
    }
    pub fn is_cross(&self, column: usize) -> bool {
        self.has(column, LinkKind::TopDown) && self.has(column, LinkKind::BottomUp)
    }
    pub fn has_horizontal(&self, column: usize, row: Row) -> bool {
        self.horizontal_links.iter().any(|l| l.column == column && l.row == row)
    }
}

/// Letter set by a couple on its own, if any.
pub fn self_determined(couple: (Symbol, Symbol)) -> Option<Letter> {
    use Symbol::*;
    match couple {
        (A, AB) | (AB, A) | (A, A) | (A, O) | (O, A) => Some(Letter::A),
        (B, AB) | (AB, B) | (B, B) | (B, O) | (O, B) => Some(Letter::B),
        _ => None,
    }
}

/// Sweep from `start` downwards around the band; `start` must self-determine.
pub fn dominance_from(s: &Symbols, start: usize) -> Option<Vec<Letter>> {
    let f = s.f;
    self_determined(s.couple(start))?;
    let mut d: Vec<Option<Letter>> = vec![None; f];
    for k in 0..f {
        let i = (start + f - k) % f;
        d[i] = match self_determined(s.couple(i)) {
            Some(l) => Some(l),
            None => d[(i + 1) % f],
        };
    }
    d.into_iter().collect()
}

pub fn assign_dominance(s: &Symbols) -> Option<Vec<Letter>> {
    let start = (0..s.f).find(|&i| self_determined(s.couple(i)).is_some())?;
    dominance_from(s, start)
}

pub fn compute_links(s: &Symbols, dominance: &Option<Vec<Letter>>) -> Decoration {
    let f = s.f;
    let mut diagonal_links = Vec::new();
    let mut horizontal_links = Vec::new();
    if let Some(d) = dominance {
        for i in 0..f {
            let j = (i + 1) % f;
            let y = d[i].symbol();
            if d[i] == d[j] {
                if s.at(i) == y {
                    diagonal_links.push(DiagonalLink { kind: LinkKind::TopDown, column: i });
                }
                if s.at(i + f) == y {
                    diagonal_links.push(DiagonalLink { kind: LinkKind::BottomUp, column: i });
                }
            } else {
                if s.at(i) == y {
                    horizontal_links.push(HorizontalLink { row: Row::Top, column: i });
                }
                if s.at(i + f) == y {
                    horizontal_links.push(HorizontalLink { row: Row::Bottom, column: i });
                }
            }
        }
    }
    Decoration { dominance: dominance.clone(), diagonal_links, horizontal_links }
}

pub fn decorate(s: &Symbols) -> Decoration {
    compute_links(s, &assign_dominance(s))
}

/// Three-line picture: top row, diagonal glyphs, bottom row. Each column is
/// four characters wide; the gap after the last column is the seam, marked
/// with `~` because it reconnects to column 0 with the rows exchanged.
pub fn render_moebius(s: &Symbols, d: &Decoration) -> String {
    let f = s.f;
    let mut lines = [String::new(), String::new(), String::new(), String::new()];
    for i in 0..f {
        let dom = d.dominance.as_ref().map_or(" ".to_string(), |v| v[i].to_string());
        lines[0].push_str(&format!("{dom:<4}"));
        let top_gap = if d.has_horizontal(i, Row::Top) { '-' } else { ' ' };
        let bot_gap = if d.has_horizontal(i, Row::Bottom) { '-' } else { ' ' };
        let mid = match (d.has(i, LinkKind::TopDown), d.has(i, LinkKind::BottomUp)) {
            (true, true) => 'X',
            (true, false) => '\\',
            (false, true) => '/',
            (false, false) => ' ',
        };
        lines[1].push_str(&format!("{:<2}{top_gap} ", s.at(i).to_string()));
        lines[2].push_str(&format!("  {mid} "));
        lines[3].push_str(&format!("{:<2}{bot_gap} ", s.at(i + f).to_string()));
    }
    for l in lines.iter_mut().skip(1) {
        l.push('~');
    }
    let mut out = String::new();
    for l in lines {
        out.push_str(l.trim_end());
        out.push('\n');
    }
    out
}
