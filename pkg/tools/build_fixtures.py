"""Regenerate the bundled fixtures under src/platrec/fixtures/v1.

The hand-written PLATOnt ontology (platont.plon) is read as is; every other
payload is produced here, and the golden graphs and views are frozen from
the current reconstruction code.  Run after editing this script:

    python3 tools/build_fixtures.py
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

from platrec._canon import pretty_dumps
from platrec.mapper import dumps_report, load_directives, reconstruct
from platrec.ontology import Individual, Ontology, OntologyClass, RelationKind, SUBKINDS
from platrec.plon import load_plon, serialize_plon
from platrec.sourceview import load_source_view
from platrec.viewgraph import ViewpointSpec, derive_view, dumps_graph, dumps_view

ROOT = Path(__file__).resolve().parents[1] / "src" / "platrec" / "fixtures" / "v1"
FROZEN_AT = "2000-01-01T00:00:00+00:00"
RELATION_CYCLE = [(fam, sub) for fam, subs in SUBKINDS.items() for sub in subs]


# ---------------------------------------------------------------- shape fixtures


def relation_kinds(n: int) -> tuple[RelationKind, ...]:
    return tuple(
        RelationKind(f"rel-{i:02d}", *RELATION_CYCLE[i % len(RELATION_CYCLE)]) for i in range(n)
    )


def platont_shape() -> Ontology:
    """84 classes, 83 links, 20 parents, depth sum 206, 33 relation kinds, 107 individuals on 60 classes."""
    classes = [OntologyClass("component")]
    mids = [f"mid-{i:02d}" for i in range(44)]
    classes += [OntologyClass(m, parents=("component",)) for m in mids]
    # 39 depth-3 leaves under the first 19 mid classes: three under the first, two under the rest
    leaves = []
    for p, parent in enumerate(mids[:19]):
        for k in range(3 if p == 0 else 2):
            leaves.append(OntologyClass(f"leaf-{parent[4:]}-{k}", parents=(parent,)))
    classes += leaves
    # populate 60 classes: the 39 leaves and 21 of the 25 childless mid classes
    populated = [c.id for c in leaves] + mids[19:40]
    individuals = []
    for n, cls in enumerate(populated):
        for k in range(2 if n < 47 else 1):
            individuals.append(Individual(f"ind-{n:02d}-{k}", cls))
    return Ontology("platont-shape", "1", tuple(classes), relation_kinds(33), tuple(individuals))


def preuveneers_shape() -> Ontology:
    """17 classes, 13 links, 4 parents, depth sum 54, 3 relation kinds, no individuals."""
    classes = [OntologyClass(f"root-{i}") for i in range(1, 5)]
    classes.append(OntologyClass("level-2", parents=("root-1",)))
    classes.append(OntologyClass("level-3", parents=("level-2",)))
    classes.append(OntologyClass("level-4", parents=("level-3",)))
    classes += [OntologyClass(f"shallow-{i}", parents=("root-1",)) for i in range(3)]
    classes += [OntologyClass(f"deep-{i}", parents=("level-4",)) for i in range(7)]
    return Ontology("preuveneers-shape", "1", tuple(classes), relation_kinds(3), ())


# ----------------------------------------------------------------- case bundles


def ev(document: str, locator: str) -> list[dict]:
    return [{"document": document, "locator": locator}]


def entity(eid, display, *, aliases=(), hint=None, evidence=None, unknown=False):
    doc = {"id": eid, "display_name": display, "aliases": list(aliases)}
    if hint is not None:
        doc["kind_hint"] = hint
    doc["evidence"] = evidence if evidence is not None else []
    doc["unknown"] = unknown
    return doc


def comp(name, cls, impl="unknown", src="unknown", trust="unknown", context=None):
    doc = {
        "name": name,
        "class": cls,
        "attributes": {"implementation": impl, "source_status": src, "trust_status": trust},
    }
    if context is not None:
        doc["context"] = context
    return doc


def conn(source, relation, target, note=None):
    doc = {"from": source, "relation": relation, "to": target}
    if note:
        doc["note"] = note
    return doc


ARM_DOC = "ARM Security Technology: Building a Secure System using TrustZone Technology"
ARM_ARM = "ARM Architecture Reference Manual, ARMv8-A"
ARM_TZIC = "TrustZone Interrupt Controller Technical Reference Manual"


def arm_tee() -> tuple[dict, dict]:
    sec, nor = "secure", "normal"
    hw = dict(impl="hardware", src="closed")
    entities = [
        entity("cpu-cores", "Cortex-A", hint="cpu", evidence=ev(ARM_ARM, "processor overview")),
        entity("processor-security-contexts", "Processor security contexts", hint="virtual-core",
               evidence=ev(ARM_DOC, "processor architecture: virtual cores")),
        entity("tza-ram", "TZA RAM", hint="memory-device", evidence=ev(ARM_DOC, "memory partitioning")),
        entity("tza-rom", "TZA ROM", hint="memory-device", evidence=ev(ARM_DOC, "memory partitioning")),
        entity("tza-flash", "TZA flash", hint="memory-device", evidence=ev(ARM_DOC, "memory partitioning")),
        entity("tza-l2-cache", "TZA L2 cache", aliases=["NS-tagged cache lines"], hint="cache",
               evidence=ev(ARM_DOC, "cache and TLB tagging")),
        entity("cp15sdisable", "CP15SDISABLE lock-down", hint="configuration-code",
               evidence=ev(ARM_DOC, "configuration lock-down")),
        entity("interrupt-handlers", "FIQ/IRQ handler code", hint="interrupt-handler",
               evidence=ev(ARM_DOC, "interrupts")),
        entity("tzic", "TrustZone Interrupt Controller", aliases=["TZIC"], hint="interrupt-controller",
               evidence=ev(ARM_TZIC, "functional overview")),
        entity("monitor-mode", "Secure monitor mode", hint="secure-monitor", evidence=ev(ARM_DOC, "monitor mode")),
        entity("hyp-mode", "Hyp mode code", hint="virtual-machine-monitor", evidence=ev(ARM_ARM, "hypervisor mode")),
        entity("secure-os", "Trusted OS", hint="main-cpu-os", evidence=ev(ARM_DOC, "secure world software")),
        entity("normal-os", "Linux", evidence=ev(ARM_DOC, "normal world software")),
        entity("trusted-apps", "Trusted applications", hint="trusted-application",
               evidence=ev(ARM_DOC, "secure world software")),
        entity("client-stack", "Normal world TEE client stack", hint="applications",
               evidence=ev(ARM_DOC, "normal world software")),
        entity("secure-boot", "Secure boot chain", hint="boot-firmware", evidence=ev(ARM_DOC, "secure boot")),
        entity("normal-bootloader", "U-Boot", evidence=ev(ARM_DOC, "boot sequence")),
        entity("smc-dispatch-quirks", "Vendor SMC dispatch extensions", unknown=True),
    ]
    entity_maps = [
        {"entity": "processor-security-contexts", "components": [
            comp("secure-virtual-cores", "virtual-core", **hw, trust="trusted", context=sec),
            comp("normal-virtual-cores", "virtual-core", **hw, trust="untrusted", context=nor),
        ]},
    ]
    for kind in ("ram", "rom", "flash"):
        entity_maps.append({"entity": f"tza-{kind}", "whole": f"main-{kind}", "components": [
            comp(f"main-{kind}", "memory-device", **hw),
            comp(f"secure-{kind}", "memory-device", **hw, trust="trusted", context=sec),
            comp(f"normal-{kind}", "memory-device", **hw, trust="untrusted", context=nor),
        ]})
    entity_maps += [
        {"entity": "tza-l2-cache", "components": [
            comp("l2-cache", "cache", **hw),
            comp("secure-cache-lines", "cache", **hw, trust="trusted", context=sec),
            comp("normal-cache-lines", "cache", **hw, trust="untrusted", context=nor),
        ]},
        {"entity": "cp15sdisable", "components": [
            comp("lockdown-config-code", "configuration-code", "software", "closed", "trusted", sec),
        ]},
        {"entity": "interrupt-handlers", "components": [
            comp("fiq-handler-code", "interrupt-handler", "software", "closed", "trusted", sec),
            comp("irq-handler-code", "interrupt-handler", "software", "open", "untrusted", nor),
        ]},
        {"entity": "tzic", "whole": "tzic", "components": [
            comp("tzic", "interrupt-controller", **hw),
            comp("fiq-interrupt-controller", "interrupt-controller", **hw),
            comp("irq-interrupt-controller", "interrupt-controller", **hw),
        ]},
        {"entity": "monitor-mode", "components": [
            comp("monitor-code", "secure-monitor", "software", "closed", "trusted", sec),
        ]},
        {"entity": "hyp-mode", "components": [
            comp("hyp-code", "virtual-machine-monitor", "software", "open", "untrusted", nor),
        ]},
        {"entity": "secure-os", "components": [
            comp("secure-os", "main-cpu-os", "software", "closed", "trusted", sec),
        ]},
        {"entity": "trusted-apps", "components": [
            comp("trusted-applications", "trusted-application", "software", "closed", "trusted", sec),
        ]},
        {"entity": "client-stack", "components": [
            comp("client-applications", "applications", "software", "open", "untrusted", nor),
            comp("tee-client-library", "libraries", "software", "open", "untrusted", nor),
            comp("tee-driver", "kernel-driver", "software", "open", "untrusted", nor),
        ]},
        {"entity": "secure-boot", "components": [
            comp("secure-boot-rom", "boot-firmware", "firmware", "closed", "trusted", sec),
            comp("secure-bootloader", "security-loader", "software", "closed", "trusted", sec),
        ]},
    ]
    connections = [
        # privileged to normal
        conn("lockdown-config-code", "modifies", "normal-virtual-cores", "locks secure configuration before normal world runs"),
        conn("monitor-code", "redirects-execution", "normal-virtual-cores", "world context switch"),
        conn("secure-os", "modifies", "normal-ram", "secure stack may write normal world memory"),
        # normal to privileged
        conn("tee-driver", "redirects-execution", "monitor-code", "SMC call"),
        # processor
        conn("secure-virtual-cores", "shares", "cpu-cores"),
        conn("normal-virtual-cores", "shares", "cpu-cores"),
        conn("monitor-code", "redirects-execution", "secure-virtual-cores", "world context switch"),
        conn("monitor-code", "redirects-execution", "cpu-cores", "monitor mode entry"),
        conn("lockdown-config-code", "modifies", "cpu-cores", "CP15SDISABLE"),
        conn("hyp-code", "interprets", "normal-os", "trap and emulate"),
        # interrupts
        conn("fiq-interrupt-controller", "redirects-execution", "monitor-code", "FIQ"),
        conn("monitor-code", "redirects-execution", "fiq-handler-code"),
        conn("irq-interrupt-controller", "redirects-execution", "irq-handler-code", "IRQ"),
        conn("secure-os", "configures", "tzic"),
        # caches
        conn("secure-cache-lines", "shares", "l2-cache", "NS bit clear"),
        conn("normal-cache-lines", "shares", "l2-cache", "NS bit set"),
        # software stacks
        conn("secure-os", "modifies", "secure-ram"),
        conn("secure-os", "executed-by", "secure-virtual-cores"),
        conn("secure-os", "stored-in", "secure-flash"),
        conn("secure-os", "loaded-into", "secure-ram"),
        conn("trusted-applications", "executed-by", "secure-virtual-cores"),
        conn("trusted-applications", "loaded-into", "secure-ram"),
        conn("normal-os", "executed-by", "normal-virtual-cores"),
        conn("normal-os", "stored-in", "normal-flash"),
        conn("normal-os", "loaded-into", "normal-ram"),
        conn("client-applications", "executed-by", "normal-virtual-cores"),
        conn("client-applications", "loaded-into", "normal-ram"),
        conn("tee-client-library", "redirects-execution", "tee-driver", "ioctl"),
        # boot
        conn("secure-boot-rom", "stored-in", "secure-rom"),
        conn("secure-boot-rom", "loads", "secure-bootloader"),
        conn("secure-bootloader", "loads", "secure-os"),
        conn("secure-bootloader", "loads", "monitor-code"),
        conn("normal-bootloader", "loads", "normal-os"),
        conn("normal-bootloader", "stored-in", "normal-flash"),
    ]
    tags = [
        {"component": "normal-os", "context": nor},
        {"component": "normal-bootloader", "context": nor},
        {"component": "cpu-cores", "context": "shared-hardware", "key": "role"},
    ]
    view = {"platform_name": "ARM TrustZone TEE (Cortex-A)", "notes": "partial reconstruction", "entities": entities}
    return view, {"entity_maps": entity_maps, "connections": connections, "context_tags": tags}


RPI_DOC = "Raspberry Pi hardware documentation"
BCM_DOC = "BCM2835 ARM Peripherals"
BOOT_DOC = "Raspberry Pi boot sequence notes"
VC_DOC = "VideoCore IV 3D Architecture Reference Guide"


def rpi() -> tuple[dict, dict]:
    hw = dict(impl="hardware", src="closed")
    gpu, arm = {"subsystem": "gpu"}, {"subsystem": "arm"}

    def world(label, base):
        return {**base, "context": label}

    entities = [
        entity("arm1176-core", "ARM1176JZF-S", evidence=ev(BCM_DOC, "ARM core")),
        entity("arm-world-cores", "ARM TrustZone virtual cores", hint="virtual-core", evidence=ev(BCM_DOC, "ARM core")),
        entity("videocore-gpu", "VideoCore IV", evidence=ev(VC_DOC, "overview")),
        entity("videocore-vpu", "VideoCore VPU", aliases=["Alphamosaic dual core"], hint="vector-processor",
               evidence=ev(VC_DOC, "VPU")),
        entity("videocore-3d", "VideoCore 3D pipeline", aliases=["QPU"], hint="co-processor", evidence=ev(VC_DOC, "QPU")),
        entity("dma-engine", "DMA engine", hint="dma-controller", evidence=ev(BCM_DOC, "DMA controller")),
        entity("sdram-controller", "SDRAM controller", hint="memory-controller", evidence=ev(BCM_DOC, "memory")),
        entity("arm-interrupt-controller", "ARM interrupt controller", hint="interrupt-controller",
               evidence=ev(BCM_DOC, "interrupts")),
        entity("lan9512", "LAN9512 USB hub and Ethernet controller", hint="usb-controller",
               evidence=ev(RPI_DOC, "schematics")),
        entity("sd-card-controller", "SD card 8051 controller", hint="storage-controller",
               evidence=ev(RPI_DOC, "SD card slot")),
        entity("videocore-os", "VideoCore OS", evidence=ev(BOOT_DOC, "GPU firmware")),
        entity("linux", "Linux", evidence=ev(RPI_DOC, "operating systems")),
        entity("op-tee", "OP-TEE", evidence=ev(RPI_DOC, "trusted OS port")),
        entity("gpu-boot-stages", "GPU boot stages", hint="boot-components", evidence=ev(BOOT_DOC, "first stages")),
        entity("arm-boot-stages", "ARM boot stages", hint="next-stage-bootloader", evidence=ev(BOOT_DOC, "ARM stages")),
        entity("u-boot", "U-Boot", evidence=ev(BOOT_DOC, "chain loading")),
        entity("sdram", "256/512MB SDRAM", hint="memory-device", evidence=ev(RPI_DOC, "memory")),
        entity("arm-memory-split", "ARM TrustZone memory split", hint="memory-device", evidence=ev(RPI_DOC, "memory")),
        entity("linux-memory-split", "Kernel/user split", hint="memory-device", evidence=ev(RPI_DOC, "memory")),
        entity("internal-rom", "Internal boot ROM", hint="memory-device", evidence=ev(BOOT_DOC, "first stage")),
        entity("l2-cache", "L2 cache", hint="cache", evidence=ev(BCM_DOC, "cache")),
        entity("arm-l1-cache", "ARM L1 caches", hint="cache", evidence=ev(BCM_DOC, "ARM core")),
        entity("sd-card", "SD card", hint="storage-device", evidence=ev(RPI_DOC, "SD card slot")),
        entity("ports", "USB/Ethernet/HDMI/Audio ports and GPIO", hint="io-port", evidence=ev(RPI_DOC, "board layout")),
        entity("axi-bus", "AXI system bus", hint="physical-bus", evidence=ev(BCM_DOC, "bus")),
        entity("mailbox", "VideoCore mailbox", hint="inter-processor-mailbox", evidence=ev(BCM_DOC, "mailboxes")),
        entity("arm-jtag", "ARM JTAG", hint="jtag", evidence=ev(BCM_DOC, "GPIO alternate functions")),
        entity("secure-world-software", "Secure world software", hint="tee-components", evidence=ev(RPI_DOC, "trusted OS port")),
        entity("userland", "Userland", hint="applications", evidence=ev(RPI_DOC, "userland")),
        entity("arm-irq-handler", "ARM IRQ handler", hint="interrupt-handler", evidence=ev(BCM_DOC, "interrupts")),
        entity("boot-config", "Boot configuration files", hint="configuration-code", evidence=ev(BOOT_DOC, "config.txt")),
        entity("xen", "Xen", evidence=ev(RPI_DOC, "hypervisor port")),
        entity("bcm2835-subblock-x", "Undocumented BCM2835 block", hint="co-processor", unknown=True),
    ]

    def one(eid, name, cls, context=None, **attrs):
        return {"entity": eid, "components": [comp(name, cls, context=context, **attrs)]}

    entity_maps = [
        {"entity": "arm-world-cores", "components": [
            comp("arm-secure-virtual-core", "virtual-core", **hw, trust="trusted", context=world("secure", arm)),
            comp("arm-normal-virtual-core", "virtual-core", **hw, trust="untrusted", context=world("normal", arm)),
        ]},
        {"entity": "videocore-vpu", "components": [
            comp("vpu-core-0", "vector-processor", **hw, context=gpu),
            comp("vpu-core-1", "vector-processor", **hw, context=gpu),
        ]},
        {"entity": "videocore-3d", "components": [
            comp("pipeline-3d", "co-processor", **hw, context=gpu),
            comp("qpu", "vector-processor", **hw, context=gpu),
        ]},
        one("dma-engine", "dma-engine", "dma-controller", gpu, **hw),
        one("sdram-controller", "sdram-controller", "memory-controller", None, **hw),
        one("arm-interrupt-controller", "arm-interrupt-controller", "interrupt-controller", arm, **hw),
        {"entity": "lan9512", "components": [
            comp("usb-ethernet-controller", "usb-controller", **hw),
            comp("usb-hub", "hub", **hw),
        ]},
        one("sd-card-controller", "sd-card-controller", "storage-controller", None, **hw),
        {"entity": "gpu-boot-stages", "components": [
            comp("gpu-boot-rom-code", "boot-firmware", "firmware", "closed", context=gpu),
            comp("bootcode-bin", "hardware-init-loader", "firmware", "closed", context=gpu),
            comp("start-elf", "next-stage-bootloader", "firmware", "closed", context=gpu),
        ]},
        {"entity": "arm-boot-stages", "components": [
            comp("armstub", "hardware-init-loader", "software", "open", context=arm),
            comp("secure-bootloader", "security-loader", "software", "open", "trusted", world("secure", arm)),
        ]},
        {"entity": "sdram", "whole": "sdram", "components": [
            comp("sdram", "memory-device", **hw),
            comp("gpu-sdram", "memory-device", **hw, context=gpu),
            comp("arm-sdram", "memory-device", **hw, context=arm),
        ]},
        {"entity": "arm-memory-split", "whole": "arm-sdram", "components": [
            comp("arm-secure-ram", "memory-device", **hw, trust="trusted", context=world("secure", arm)),
            comp("arm-normal-ram", "memory-device", **hw, trust="untrusted", context=world("normal", arm)),
        ]},
        {"entity": "linux-memory-split", "whole": "arm-normal-ram", "components": [
            comp("kernel-ram", "memory-device", **hw, context=world("normal", arm)),
            comp("user-ram", "memory-device", **hw, context=world("normal", arm)),
        ]},
        one("internal-rom", "internal-boot-rom", "memory-device", gpu, **hw),
        one("l2-cache", "l2-cache", "cache", gpu, **hw),
        one("arm-l1-cache", "arm-l1-cache", "cache", arm, **hw),
        one("sd-card", "sd-card", "storage-device", None, **hw),
        {"entity": "ports", "components": [
            comp("usb-ports", "io-port", **hw),
            comp("ethernet-port", "network-interface", **hw),
            comp("hdmi-port", "io-port", **hw),
            comp("audio-port", "io-port", **hw),
            comp("gpio", "io-port", **hw),
        ]},
        one("axi-bus", "axi-bus", "physical-bus", None, **hw),
        one("mailbox", "vpu-arm-mailbox", "inter-processor-mailbox", None, **hw),
        one("arm-jtag", "arm-jtag", "jtag", arm, **hw),
        {"entity": "secure-world-software", "components": [
            comp("secure-monitor-code", "secure-monitor", "software", "open", "trusted", world("secure", arm)),
            comp("trusted-applications", "trusted-application", "software", "hybrid", "trusted", world("secure", arm)),
        ]},
        {"entity": "userland", "components": [
            comp("user-applications", "applications", "software", "open", "untrusted", world("normal", arm)),
            comp("opengl-es-library", "libraries", "software", "closed", "untrusted", world("normal", arm)),
        ]},
        one("arm-irq-handler", "arm-irq-handler", "interrupt-handler", arm, impl="software", src="open"),
        {"entity": "boot-config", "components": [
            comp("config-txt", "configuration-code", "software", "open", context=gpu),
            comp("device-tree-blob", "configuration-code", "software", "open", context=arm),
        ]},
    ]
    connections = [
        # boot chain
        conn("gpu-boot-rom-code", "loads", "bootcode-bin"),
        conn("bootcode-bin", "loads", "start-elf"),
        conn("start-elf", "loads", "armstub"),
        conn("armstub", "loads", "secure-bootloader"),
        conn("secure-bootloader", "loads", "u-boot"),
        conn("start-elf", "loads", "videocore-os"),
        conn("secure-bootloader", "loads", "op-tee"),
        conn("secure-bootloader", "loads", "secure-monitor-code"),
        conn("u-boot", "loads", "linux"),
        conn("gpu-boot-rom-code", "stored-in", "internal-boot-rom"),
        conn("bootcode-bin", "stored-in", "sd-card"),
        conn("start-elf", "stored-in", "sd-card"),
        conn("armstub", "stored-in", "sd-card"),
        conn("u-boot", "stored-in", "sd-card"),
        conn("linux", "stored-in", "sd-card"),
        conn("config-txt", "stored-in", "sd-card"),
        conn("device-tree-blob", "stored-in", "sd-card"),
        conn("bootcode-bin", "loaded-into", "l2-cache", "cache as RAM"),
        conn("start-elf", "loaded-into", "gpu-sdram"),
        conn("gpu-boot-rom-code", "executed-by", "vpu-core-0"),
        conn("bootcode-bin", "executed-by", "vpu-core-0"),
        conn("start-elf", "executed-by", "vpu-core-0"),
        conn("armstub", "executed-by", "arm1176-core"),
        conn("secure-bootloader", "executed-by", "arm-secure-virtual-core"),
        conn("u-boot", "executed-by", "arm-normal-virtual-core"),
        conn("bootcode-bin", "initializes", "sdram-controller"),
        conn("armstub", "initializes", "arm1176-core"),
        conn("config-txt", "configures", "start-elf"),
        conn("device-tree-blob", "configures", "linux"),
        # operating systems
        conn("videocore-os", "executed-by", "vpu-core-0"),
        conn("videocore-os", "executed-by", "vpu-core-1"),
        conn("videocore-os", "interprets", "opengl-es-library", "offloaded OpenGL commands"),
        conn("op-tee", "executed-by", "arm-secure-virtual-core"),
        conn("op-tee", "loaded-into", "arm-secure-ram"),
        conn("op-tee", "modifies", "arm-normal-ram"),
        conn("secure-monitor-code", "executed-by", "arm-secure-virtual-core"),
        conn("secure-monitor-code", "redirects-execution", "arm-normal-virtual-core", "world switch"),
        conn("trusted-applications", "executed-by", "arm-secure-virtual-core"),
        conn("trusted-applications", "loaded-into", "arm-secure-ram"),
        conn("linux", "executed-by", "arm-normal-virtual-core"),
        conn("linux", "loaded-into", "kernel-ram"),
        conn("linux", "modifies", "user-ram"),
        conn("linux", "redirects-execution", "secure-monitor-code", "SMC call"),
        conn("linux", "configures", "gpio"),
        conn("linux", "configures", "audio-port"),
        conn("linux", "configures", "usb-ethernet-controller"),
        conn("xen", "interprets", "linux"),
        conn("xen", "executed-by", "arm-normal-virtual-core"),
        conn("user-applications", "executed-by", "arm-normal-virtual-core"),
        conn("user-applications", "loaded-into", "user-ram"),
        conn("opengl-es-library", "loaded-into", "user-ram"),
        # processors and caches
        conn("arm-secure-virtual-core", "shares", "arm1176-core"),
        conn("arm-normal-virtual-core", "shares", "arm1176-core"),
        conn("videocore-gpu", "shares", "l2-cache", "default owner"),
        conn("arm1176-core", "shares", "l2-cache", "only when enabled"),
        conn("arm1176-core", "shares", "arm-l1-cache"),
        conn("qpu", "shares", "pipeline-3d"),
        conn("vpu-core-1", "configures", "pipeline-3d"),
        conn("videocore-gpu", "redirects-execution", "arm1176-core", "GPU interrupts ARM"),
        conn("vpu-arm-mailbox", "redirects-execution", "arm-interrupt-controller"),
        conn("arm-interrupt-controller", "redirects-execution", "arm-irq-handler"),
        conn("arm-jtag", "debugs", "arm1176-core"),
        # memory
        conn("videocore-gpu", "modifies", "arm-secure-ram", "GPU bypasses TrustZone memory protection"),
        conn("dma-engine", "modifies", "sdram"),
        conn("sdram-controller", "mediates-physically", "sdram"),
        # buses and devices
        conn("axi-bus", "mediates-physically", "sdram-controller"),
        conn("axi-bus", "mediates-physically", "sd-card-controller"),
        conn("sd-card-controller", "mediates-physically", "sd-card"),
        conn("usb-hub", "mediates-physically", "usb-ports"),
        conn("usb-ethernet-controller", "mediates-physically", "ethernet-port"),
        conn("videocore-gpu", "configures", "hdmi-port"),
    ]
    tags = [
        {"component": "arm1176-core", "context": "arm", "key": "subsystem"},
        {"component": "videocore-gpu", "context": "gpu", "key": "subsystem"},
        {"component": "videocore-os", "context": "gpu", "key": "subsystem"},
        {"component": "linux", "context": "arm", "key": "subsystem"},
        {"component": "linux", "context": "normal"},
        {"component": "op-tee", "context": "arm", "key": "subsystem"},
        {"component": "op-tee", "context": "secure"},
        {"component": "u-boot", "context": "arm", "key": "subsystem"},
        {"component": "u-boot", "context": "normal"},
        {"component": "xen", "context": "arm", "key": "subsystem"},
        {"component": "xen", "context": "normal"},
    ]
    view = {"platform_name": "Raspberry Pi (model A)", "notes": "whole-system reconstruction", "entities": entities}
    return view, {"entity_maps": entity_maps, "connections": connections, "context_tags": tags}


RPI_VIEWPOINTS = [
    {"name": "boot", "concern": "free bootloader development and boot security",
     "selectors": {"classes": ["boot-components"]}, "relation_filter": {"subkinds": ["load"]},
     "closure": {"mode": "seeds-only", "hops": 1}},
    {"name": "memory", "concern": "memory forensic tool development",
     "selectors": {"classes": ["memory-device"]}, "relation_filter": {"subkinds": ["partitioned", "modification"]},
     "closure": {"mode": "neighbors", "hops": 1}},
    {"name": "cache", "concern": "cache side channel attacks",
     "selectors": {"classes": ["cache"]}, "relation_filter": {"subkinds": ["shared"]},
     "closure": {"mode": "neighbors", "hops": 1}},
    {"name": "gpu", "concern": "GPU programming",
     "selectors": {"contexts": {"subsystem": "gpu"}}, "closure": {"mode": "seeds-only", "hops": 1}},
]
ARM_VIEWPOINTS = [
    {"name": "isolation", "concern": "cross-world isolation",
     "selectors": {"contexts": {"context": "secure"}}, "relation_filter": {"families": ["control"]},
     "closure": {"mode": "neighbors", "hops": 1}},
]


# ------------------------------------------------------------------------ main


def write(rel: str, text: str, manifest: list, fid: str, kind: str) -> None:
    path = ROOT / rel
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8", newline="\n")
    manifest.append({"id": fid, "kind": kind, "path": rel, "sha256": hashlib.sha256(text.encode("utf-8")).hexdigest()})


def main() -> None:
    manifest: list[dict] = []
    platont_text = (ROOT / "platont.plon").read_text(encoding="utf-8")
    platont = load_plon(ROOT / "platont.plon")
    write("platont.plon", platont_text, manifest, "platont", "ontology")
    write("platont-shape.plon", serialize_plon(platont_shape()), manifest, "platont-shape", "ontology")
    write("preuveneers-shape.plon", serialize_plon(preuveneers_shape()), manifest, "preuveneers-shape", "ontology")

    for bundle, builder, viewpoints in (("arm-tee", arm_tee, ARM_VIEWPOINTS), ("rpi", rpi, RPI_VIEWPOINTS)):
        view_doc, directives_doc = builder()
        write(f"{bundle}/source-view.json", pretty_dumps(view_doc), manifest, f"{bundle}/source-view", "source-view")
        write(f"{bundle}/directives.json", pretty_dumps(directives_doc), manifest, f"{bundle}/directives", "directives")
        graph, report = reconstruct(load_source_view(view_doc), platont, load_directives(directives_doc))
        write(f"{bundle}/expected-graph.json", dumps_graph(graph), manifest, f"{bundle}/expected-graph", "expected-graph")
        write(f"{bundle}/expected-report.json", dumps_report(report), manifest, f"{bundle}/expected-report", "mapping-report")
        for vp in viewpoints:
            spec = ViewpointSpec.from_json(vp)
            write(f"{bundle}/viewpoints/{spec.name}.json", pretty_dumps(spec.to_json()), manifest,
                  f"{bundle}/viewpoint/{spec.name}", "viewpoint")
            view = derive_view(graph, spec, FROZEN_AT)
            write(f"{bundle}/expected-views/{spec.name}.json", dumps_view(view), manifest,
                  f"{bundle}/expected-view/{spec.name}", "expected-view")

    manifest.sort(key=lambda e: e["id"])
    (ROOT / "manifest.json").write_text(
        pretty_dumps({"version": 1, "fixtures": manifest}), encoding="utf-8", newline="\n"
    )
    print(f"wrote {len(manifest)} fixtures to {ROOT}")


if __name__ == "__main__":
    main()
