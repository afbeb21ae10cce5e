"""occ2vec: occupation embeddings from weighted descriptor texts.

Occupations become d-dimensional vectors by averaging text embeddings of
their descriptors (weighted within categories, uniform across categories);
any free-text characteristic is scored against every occupation via
standardized component-wise correlations.
"""

__version__ = "0.1.0"

from .onet_ingest import (  # noqa: F401
    Category,
    CharacteristicDefinition,
    DescriptorCatalog,
    LaborStats,
    load_catalog,
    load_characteristic,
    load_labor_stats,
    parse_onet_tables,
    write_catalog,
)
from .embedding import EmbedderConfig, EmbeddingCache, embed_texts, hash_embed  # noqa: F401
from .core import (  # noqa: F401
    ScoreTable,
    build_occupation_embeddings,
    characteristic_embedding,
    score_all,
    similarity,
    top_bottom,
)
