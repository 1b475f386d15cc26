from src.absinv.inverses import (
    rank,
    group_inverse,
    KernelVector,
    kernel_vector,
    AbsorptionInverse,
    absorption_inverse,
)
from src.absinv.identities import (
    IdentityCheck,
    SMStep,
    FirstOrderError,
    fundamental_from_absinv,
    series_fundamental,
    absinv_first_order_error,
    z1_from_z0,
    z1_direct,
    sherman_morrison_chain,
    l1_absinv_relation,
    dprime_absinv_relation,
    group_inverse_relation,
    check_identities,
    identity_suite,
)


__all__ = ['rank', 'group_inverse', 'KernelVector', 'kernel_vector', 'AbsorptionInverse', 'absorption_inverse',
           'IdentityCheck', 'SMStep', 'FirstOrderError', 'fundamental_from_absinv', 'series_fundamental',
           'absinv_first_order_error', 'z1_from_z0', 'z1_direct', 'sherman_morrison_chain', 'l1_absinv_relation',
           'dprime_absinv_relation', 'group_inverse_relation', 'check_identities', 'identity_suite']
