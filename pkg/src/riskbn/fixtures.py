"""The In-Vehicle Infotainment (IVI) case study.

Two independent encodings of the same 20-node model: ``ivi_network()`` is
written out table by table, ``IVI_ATTACK_TREE`` is the attack-tree source.
Transforming the tree must reproduce the hand-built network exactly.
"""

from __future__ import annotations

from riskbn.network import BayesianNetwork, Cpt, NodeSpec, build_network

T_26 = "T_BluetoothtoOBC_26_UnauthorizedControl"
D_24 = "D_BluetoothtoOBC_24_OverloadAttack"
D_16 = "D_WiFitoOBC_16_ServiceDenial"
T_18 = "T_WiFitoOBC_18_DataAlteration"
I_33 = "I_CBtoOBC_33_InfoSniffing"
T_34 = "T_CBtoOBC_34_MessageAlteration"
R_3 = "R_OBC_3_MaliciousExploitation"
T_2 = "T_OBC_2_CommandTampering"
I_4 = "I_OBC_4_PrivacyBreach"
E_6 = "E_OBC_6_PrivilegedOperations"

I_25 = "I_BluetoothtoOBC_25_DataSniffing"
I_17 = "I_WiFitoOBC_17_CredentialTheft"
S_1 = "S_OBC_1_ProcessImpersonation"
D_5 = "D_OBC_5_ServiceDisruption"
INITIAL_RECON = "Initial_Recon"
CAN_CONTROL = "CAN_Control"
DISRUPT = "Disrupt_Vehicle_Functionality"
SYSTEM_COMPROMISE = "Safety_Critical_System_Compromise"

ROOTS = (T_26, D_24, D_16, T_18, I_33, T_34, R_3, T_2, I_4, E_6)
INTERMEDIATES = (I_25, I_17, S_1, D_5, INITIAL_RECON, CAN_CONTROL, DISRUPT, SYSTEM_COMPROMISE)

# (R, E, D) per root threat
DREAD = {
    T_26: (2, 2, 2),
    D_24: (3, 2, 2),
    D_16: (3, 2, 2),
    T_18: (2, 3, 2),
    I_33: (2, 2, 2),
    T_34: (2, 2, 2),
    R_3: (2, 2, 2),
    T_2: (2, 2, 2),
    I_4: (2, 2, 2),
    E_6: (2, 2, 3),
}

PRIORS = {
    T_26: 0.67, D_24: 0.73, D_16: 0.73, T_18: 0.83, I_33: 0.67,
    T_34: 0.67, R_3: 0.67, T_2: 0.67, I_4: 0.67, E_6: 0.77,
}

_STRIDE = {
    "S": "Spoofing", "T": "Tampering", "R": "Repudiation",
    "I": "InformationDisclosure", "D": "DenialOfService", "E": "ElevationOfPrivilege",
}

# (gate kind, parents in canonical order, (p_false, p_true) rows)
GATES = {
    I_25: ("OR", (T_26, D_24), [(0.80, 0.20), (0.40, 0.60), (0.20, 0.80), (0.10, 0.90)]),
    I_17: ("OR", (D_16, T_18), [(0.92, 0.08), (0.30, 0.70), (0.75, 0.25), (0.10, 0.90)]),
    S_1: ("OR", (R_3, T_2), [(0.90, 0.10), (0.15, 0.85), (0.15, 0.85), (0.02, 0.98)]),
    D_5: ("OR", (E_6, I_4), [(0.80, 0.20), (0.40, 0.60), (0.15, 0.85), (0.05, 0.95)]),
    INITIAL_RECON: (
        "OR", (I_25, I_17), [(0.90, 0.10), (0.25, 0.75), (0.25, 0.75), (0.05, 0.95)],
    ),
    CAN_CONTROL: (
        "AND",
        (I_33, S_1, T_34),
        [
            (0.95, 0.05), (0.70, 0.30), (0.80, 0.20), (0.40, 0.60),
            (0.85, 0.15), (0.30, 0.70), (0.50, 0.50), (0.05, 0.95),
        ],
    ),
    DISRUPT: ("OR", (D_5, T_2), [(0.90, 0.10), (0.25, 0.75), (0.20, 0.80), (0.05, 0.95)]),
    SYSTEM_COMPROMISE: (
        "OR",
        (CAN_CONTROL, INITIAL_RECON, DISRUPT),
        [
            (0.95, 0.05), (0.20, 0.80), (0.25, 0.75), (0.05, 0.95),
            (0.25, 0.75), (0.05, 0.95), (0.05, 0.95), (0.01, 0.99),
        ],
    ),
}

# ATT&CK techniques cited for each gate's CPT; informational only.
MITRE_TECHNIQUES = {
    I_25: ("T1546", "T1499"),
    I_17: ("T1565.001", "T1498"),
    S_1: ("T1203", "T1565"),
    D_5: ("T1078", "T1530"),
    INITIAL_RECON: ("T1040", "T1555"),
    CAN_CONTROL: ("T1040", "T1565.002", "T1055.012"),
    DISRUPT: ("T1565", "T1499"),
}


def ivi_network() -> BayesianNetwork:
    specs = []
    for node in ROOTS:
        r, e, d = DREAD[node]
        p = PRIORS[node]
        specs.append(
            NodeSpec(
                node,
                Cpt((), ((round(1 - p, 2), p),)),
                {"stride": _STRIDE[node[0]], "dread": f"R={r},E={e},D={d}"},
            )
        )
    for node in INTERMEDIATES:
        kind, parents, rows = GATES[node]
        specs.append(NodeSpec(node, Cpt(parents, tuple(rows)), {"gate": kind}))
    return build_network(specs)


IVI_ATTACK_TREE = """\
# IVI attack tree, goal: Safety_Critical_System_Compromise
# Leaf priors come from DREAD (R, E, D on a 1-3 scale).
leaf T_BluetoothtoOBC_26_UnauthorizedControl dread(R=2, E=2, D=2)
leaf D_BluetoothtoOBC_24_OverloadAttack dread(R=3, E=2, D=2)
leaf D_WiFitoOBC_16_ServiceDenial dread(R=3, E=2, D=2)
leaf T_WiFitoOBC_18_DataAlteration dread(R=2, E=3, D=2)
leaf I_CBtoOBC_33_InfoSniffing dread(R=2, E=2, D=2)
leaf T_CBtoOBC_34_MessageAlteration dread(R=2, E=2, D=2)
leaf R_OBC_3_MaliciousExploitation dread(R=2, E=2, D=2)
leaf T_OBC_2_CommandTampering dread(R=2, E=2, D=2)
leaf I_OBC_4_PrivacyBreach dread(R=2, E=2, D=2)
leaf E_OBC_6_PrivilegedOperations dread(R=2, E=2, D=3)

# Threat-level gates
gate I_BluetoothtoOBC_25_DataSniffing OR {
    T_BluetoothtoOBC_26_UnauthorizedControl, D_BluetoothtoOBC_24_OverloadAttack
} cpt [0.20, 0.60, 0.80, 0.90]
gate I_WiFitoOBC_17_CredentialTheft OR {
    D_WiFitoOBC_16_ServiceDenial, T_WiFitoOBC_18_DataAlteration
} cpt [0.08, 0.70, 0.25, 0.90]
gate S_OBC_1_ProcessImpersonation OR {
    R_OBC_3_MaliciousExploitation, T_OBC_2_CommandTampering
} cpt [0.10, 0.85, 0.85, 0.98]
gate D_OBC_5_ServiceDisruption OR {
    E_OBC_6_PrivilegedOperations, I_OBC_4_PrivacyBreach
} cpt [0.20, 0.60, 0.85, 0.95]

# Attack steps
gate Initial_Recon OR {
    I_BluetoothtoOBC_25_DataSniffing, I_WiFitoOBC_17_CredentialTheft
} cpt [0.10, 0.75, 0.75, 0.95]
gate CAN_Control AND {
    I_CBtoOBC_33_InfoSniffing, S_OBC_1_ProcessImpersonation, T_CBtoOBC_34_MessageAlteration
} cpt [0.05, 0.30, 0.20, 0.60, 0.15, 0.70, 0.50, 0.95]
gate Disrupt_Vehicle_Functionality OR {
    D_OBC_5_ServiceDisruption, T_OBC_2_CommandTampering
} cpt [0.10, 0.75, 0.80, 0.95]

# Goal
gate Safety_Critical_System_Compromise OR {
    CAN_Control, Initial_Recon, Disrupt_Vehicle_Functionality
} cpt [0.05, 0.80, 0.75, 0.95, 0.75, 0.95, 0.95, 0.99]
"""

# Published results used as acceptance anchors.
PUBLISHED_FORWARD_MARGINALS = {
    I_25: 0.7473,
    I_17: 0.7369,
    S_1: 0.8267,
    D_5: 0.8137,
    INITIAL_RECON: 0.8169,
    CAN_CONTROL: 0.6443,
    DISRUPT: 0.8325,
}
PUBLISHED_SYSTEM_COMPROMISE = 0.9348

# node -> (posterior P(node=1), P(SC=1 | do(node=1)), delta) as printed
PUBLISHED_INTERVENTIONS = {
    T_26: (0.6700, 0.9400, 0.2700),
    D_24: (0.7300, 0.9370, 0.2070),
    T_18: (0.8300, 0.9392, 0.1092),
    D_16: (0.7300, 0.9369, 0.2069),
    R_3: (0.6700, 0.9384, 0.2684),
    T_2: (0.6700, 0.9505, 0.2805),
    I_33: (0.6700, 0.9454, 0.2754),
    T_34: (0.6700, 0.9490, 0.2790),
    E_6: (0.7700, 0.9407, 0.1707),
    I_4: (0.6700, 0.9380, 0.2680),
    I_25: (0.7673, 0.9453, 0.1780),
    I_17: (0.7369, 0.9456, 0.2087),
    INITIAL_RECON: (0.8169, 0.9588, 0.1419),
    S_1: (0.8267, 0.9406, 0.1139),
    CAN_CONTROL: (0.6443, 0.9711, 0.3268),
    D_5: (0.8137, 0.9455, 0.1318),
    DISRUPT: (0.8325, 0.9613, 0.1288),
}
