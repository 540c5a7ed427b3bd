from selectq.nets.groups import (
    GROUP_ORDER,
    GroupSpec,
    PhaseInput,
    Permutation,
    apply_permutation,
    group_specs,
    permute_rows,
    stack_inputs,
)
from selectq.nets.layers import ACTIVATIONS, SharedLayerParams, layer_forward
from selectq.nets.network import (
    SharedParams,
    backward_batch,
    build_shared_params,
    forward_batch,
    network_backward,
    network_forward,
    param_count,
    zero_pooled,
)
from selectq.nets.projection import (
    DenseNet,
    dense_forward,
    flatten_inputs,
    permute_dense,
    project_params,
    pull_back_gradient,
)
from selectq.nets.serialization import dump_params, load_params, read_params, save_params
