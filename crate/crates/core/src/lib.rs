pub mod catalog;
pub mod en50549;
pub mod fixtures;
pub mod ns;
pub mod opensvp;
pub mod prov;
pub mod rdf;
pub mod report;
pub mod scm;
pub mod store;
pub mod turtle;
pub mod vocab;
