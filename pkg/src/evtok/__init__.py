"""evtok: event-camera stream tokenization and analysis toolkit."""

from .errors import (
    BadMagic,
    BadPolarityAt,
    EmptyStream,
    EmptyTimeRange,
    EventOutsidePatch,
    EvtokError,
    InvalidConfig,
    InvertedWindow,
    MismatchedStreams,
    NegativeDelta,
    NonMonotonicTime,
    OutOfBounds,
    OutOfBoundsAt,
    ParseErrorAt,
    SpecOutOfBounds,
    TruncatedFile,
    UnsortedAt,
    ZeroPatchSize,
    ZeroScale,
)
from .events import (
    Event,
    EventStream,
    SensorGeometry,
    from_arrays,
    grid_shape,
    patch_index,
    validate_stream,
    window_slice,
)
from .tokens import Token, TokenStream
from .spiking import (
    DECAY,
    DISCRETE,
    PLAIN,
    ResidueReport,
    SpikingTokenizer,
    TokenizerConfig,
    new_tokenizer,
    tokenize_stream,
)
from .baselines import FrameConfig, VoxelConfig, frame_patches, voxelize
from .embedding import (
    DEFAULT_BUCKET_EDGES_MS,
    EmbeddingConfig,
    StackedHistogram,
    embed_log,
    histograms_for_stream,
    pol_channel,
    read_histograms,
    scale_time,
    stacked_histogram,
    time_bucket,
    write_histograms,
)
from .analysis import (
    AccumulationCurve,
    BenchReport,
    CountReport,
    SparsityComparison,
    SparsityReport,
    accumulation_curve,
    bench_throughput,
    compare_sparsity,
    delay_estimate,
    sparsity,
    token_count_stats,
)
from .event_io import (
    MovingBarSpec,
    PoissonFieldSpec,
    generate_moving_bar,
    generate_poisson_field,
    read_csv,
    read_evs,
    write_csv,
    write_evs,
    write_tokens_text,
)

__version__ = "0.1.0"
