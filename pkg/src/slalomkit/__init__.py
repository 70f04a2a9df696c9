"""Finite-horizon combinatorics of splitting points, binary slaloms and rapid filters."""

from .codec import (
    binary_to_slalom,
    decode_seq,
    decode_seqs,
    encode_point,
    encode_points,
    nat_of_word,
    slalom_to_binary,
    word_of_nat,
)
from .core import (
    AlignmentError,
    EventualCertificate,
    HypothesisFailure,
    InvalidInput,
    InvalidPartition,
    InvalidTarget,
    NoSplit,
    NotDominated,
    Partition,
    ResourceLimit,
    SlalomError,
    WidthViolation,
    eventually_subset,
    make_partition,
    shift_set,
    split_point,
    split_set,
)
from .filterlab import (
    FilterCertificate,
    certificate_for,
    check_certificate,
    diagonalize,
    eventual_closure_cover,
    powerset_points,
    prepend_cover_transport,
    shift_closure,
    shift_decomposition,
    union_certificate,
    unprepend_cover_transport,
    witness_of_cover,
)
from .pipelines import (
    clip_to_bound,
    dominate_family,
    encode_family,
    pair_union_bound,
    partreal,
    pull_capture_through_encoding,
    sigma_union_witness,
    slalom_catalog,
)
from .rapidity import (
    check_rapidity_witness,
    chi,
    reparam_target,
    slalom_from_cover,
    witness_from_binary_slalom,
)
from .slalom import (
    FLOOR_SQRT,
    IDENTITY,
    TRIANGULAR,
    BinarySlalom,
    CaptureCertificate,
    Slalom,
    WidthFunction,
    capture_set,
    check_width,
    goes_through_point,
    goes_through_seq,
)

__version__ = "0.1.0"
