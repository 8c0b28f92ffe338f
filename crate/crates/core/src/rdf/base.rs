use std::fmt;

use percent_encoding::{utf8_percent_encode, AsciiSet, NON_ALPHANUMERIC};

use super::{is_absolute_iri, Iri, RdfError};
use crate::ns::DEFAULT_DATA_BASE;

/// Characters left as-is in minted path segments (RFC 3986 unreserved).
const SEGMENT: &AsciiSet = &NON_ALPHANUMERIC.remove(b'-').remove(b'.').remove(b'_').remove(b'~');

/// Base IRI for minted instance IRIs, stored without a trailing slash.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BaseIri(String);

impl BaseIri {
    pub fn new(text: &str) -> Result<Self, RdfError> {
        let trimmed = text.trim_end_matches('/');
        if is_absolute_iri(trimmed) && !trimmed.contains(['#', '?']) {
            Ok(BaseIri(trimmed.to_owned()))
        } else {
            Err(RdfError::InvalidIri(text.to_owned()))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// `<base>/<seg>/<seg>...` with each segment percent-encoded.
    pub fn mint(&self, segments: &[&str]) -> Iri {
        let mut s = self.0.clone();
        for seg in segments {
            s.push('/');
            s.extend(utf8_percent_encode(seg, SEGMENT));
        }
        Iri::new_unchecked(s)
    }

    /// Inverse of [`BaseIri::mint`] for IRIs under `<base>/<first>/`.
    pub fn segments_after(&self, iri: &str, first: &str) -> Option<Vec<String>> {
        let rest = iri.strip_prefix(self.0.as_str())?.strip_prefix('/')?;
        let rest = rest.strip_prefix(first)?.strip_prefix('/')?;
        rest.split('/')
            .map(|p| percent_encoding::percent_decode_str(p).decode_utf8().ok().map(|c| c.into_owned()))
            .collect()
    }
}

impl Default for BaseIri {
    fn default() -> Self {
        BaseIri(DEFAULT_DATA_BASE.to_owned())
    }
}

impl fmt::Display for BaseIri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}
