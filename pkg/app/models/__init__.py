from .descriptor import DescriptorSet, Dictionary, MultiViewDescriptor
from .kernel import VIEW_ORDER, AnchorSet, KernelizedFeature, KernelKind, Modality, View
from .labels import LabelMatrix
from .codes import BinaryCode, HammingIndex, pack_bits, unpack_bits
from .metrics import PrCurve, PrPoint, RelevanceJudge, RelevanceMode, RetrievalTask
from .state import HashingModel, TrainState
