"""MeSH and cited-reference matrices, bounded citation networks and SPC main paths
from PubMed/MEDLINE and Web of Science exports."""

from .citegraph import CitationGraph, CitationKey, build_local_citation_graph, citation_key, local_citation_scores
from .corpus import Corpus, Document, attach_times_cited, emit_pubmed_search_string, emit_wos_search_string, link_by_pmid
from .formats import PajekNetwork, read_pajek, read_partition, write_pajek, write_partition, write_spss_matrix
from .mainpath import (AcyclicPrepReport, MainPathResult, SpcWeights, condense_strong_components,
                       extract_largest_weak_component, main_path, make_acyclic, remove_loops, spc)
from .matrices import (SparseLabeledMatrix, build_cr_mesh, build_doc_attributes, build_doc_cr, build_doc_mesh,
                       build_jcr_mesh, project_columns, similarity)
from .medline import MedlineRecord, MeshHeading, extract_mesh, parse_medline
from .stats import citations_by_mesh, corpus_counts, gini, top_frequencies, yearly_series
from .wos import CitedReference, WosRecord, parse_cited_reference, parse_wos, referenced_journal

__version__ = "0.1.0"
