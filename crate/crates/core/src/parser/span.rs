use serde::{Deserialize, Serialize};

/// Location of a code element: 1-based inclusive lines, 0-based byte columns.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SourceSpan {
    pub file_path: String,
    pub start_line: usize,
    pub start_col: usize,
    pub end_line: usize,
    pub end_col: usize,
}

impl SourceSpan {
    pub fn is_well_formed(&self) -> bool {
        self.start_line >= 1
            && self.start_line <= self.end_line
            && (self.start_line != self.end_line || self.start_col <= self.end_col)
            && !self.file_path.contains('\\')
    }

    /// True when `other` lies inside `self` and the two are not identical.
    pub fn strictly_contains(&self, other: &SourceSpan) -> bool {
        let start = (self.start_line, self.start_col) <= (other.start_line, other.start_col);
        let end = (other.end_line, other.end_col) <= (self.end_line, self.end_col);
        start && end && self != other
    }

    /// `first-last` line range, as used in rendered headers.
    pub fn line_range(&self) -> String {
        format!("{}-{}", self.start_line, self.end_line)
    }
}

/// Byte offsets of line starts, for mapping spans back onto text.
#[derive(Debug, Clone)]
pub struct LineIndex {
    starts: Vec<usize>,
    len: usize,
}

impl LineIndex {
    pub fn new(text: &str) -> Self {
        let mut starts = vec![0];
        starts.extend(text.match_indices('\n').map(|(i, _)| i + 1));
        LineIndex {
            starts,
            len: text.len(),
        }
    }

    pub fn offset(&self, line: usize, col: usize) -> Option<usize> {
        let start = *self.starts.get(line.checked_sub(1)?)?;
        let offset = start + col;
        (offset <= self.len).then_some(offset)
    }

    /// Zero-based (row, column) of a byte offset.
    pub fn position(&self, offset: usize) -> (usize, usize) {
        let row = match self.starts.binary_search(&offset) {
            Ok(row) => row,
            Err(next) => next - 1,
        };
        (row, offset - self.starts[row])
    }

    pub fn slice<'a>(&self, text: &'a str, span: &SourceSpan) -> Option<&'a str> {
        let start = self.offset(span.start_line, span.start_col)?;
        let end = self.offset(span.end_line, span.end_col)?;
        text.get(start..end)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn span(sl: usize, sc: usize, el: usize, ec: usize) -> SourceSpan {
        SourceSpan {
            file_path: "a.py".into(),
            start_line: sl,
            start_col: sc,
            end_line: el,
            end_col: ec,
        }
    }

    #[test]
    fn slices_multi_line_span() {
        let text = "def f():\n    return 1\n";
        let index = LineIndex::new(text);
        assert_eq!(index.slice(text, &span(1, 0, 2, 12)), Some("def f():\n    return 1"));
        assert_eq!(index.slice(text, &span(3, 0, 3, 0)), Some(""));
        assert_eq!(index.slice(text, &span(4, 0, 4, 0)), None);
    }

    #[test]
    fn position_round_trips_offset() {
        let text = "ab\ncd\n\nef";
        let index = LineIndex::new(text);
        for offset in 0..=text.len() {
            let (row, col) = index.position(offset);
            assert_eq!(index.offset(row + 1, col), Some(offset));
        }
    }

    #[test]
    fn containment_is_strict() {
        let outer = span(1, 0, 10, 0);
        assert!(outer.strictly_contains(&span(2, 4, 3, 1)));
        assert!(!outer.strictly_contains(&outer.clone()));
        assert!(!span(2, 4, 3, 1).strictly_contains(&outer));
        assert!(span(2, 0, 2, 0).is_well_formed());
        assert!(!span(3, 0, 2, 0).is_well_formed());
        assert!(!span(2, 5, 2, 1).is_well_formed());
    }
}
