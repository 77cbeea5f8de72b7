#!/usr/bin/env python3
"""
Demo script walking through the online schedulers on a few generated instances
Shows m* from the oracle, what each algorithm uses, and an SJF failure certificate
"""

import sys
from pathlib import Path

# Add the repository root to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from backend.app.certify.bounds import implied_lower_bound
from backend.app.certify.critical import check_weakly_critical
from backend.app.certify.sjf_certificate import extract_sjf_certificate
from backend.app.core.rational import format_rational
from backend.app.experiments.harness import execute, oracle_m_star
from backend.app.experiments.suites import engineered_sjf_failure
from backend.app.gen.generator import GenSpec, generate
from backend.app.schedulers.registry import AlgorithmConfig


def demo_algorithms():
    """Every algorithm on one loose and one very tight instance"""
    print("⚙️  Online algorithms vs. the offline optimum")
    print("=" * 40)

    instances = {
        "loose": generate(GenSpec(kind="loose", n=30, horizon=40, max_size=8, seed=11)),
        "very tight": generate(GenSpec(kind="very_tight", m=8, n=24, horizon=30, seed=11)),
    }
    configs = [
        AlgorithmConfig(algorithm="edf", multiplier=4),
        AlgorithmConfig(algorithm="cms", multiplier=8),
        AlgorithmConfig(algorithm="hybrid"),
        AlgorithmConfig(algorithm="hybrid-adaptive"),
        AlgorithmConfig(algorithm="edf", doubling=True, multiplier=4),
    ]

    for name, inst in instances.items():
        m_star = oracle_m_star(inst)
        print(f"\n📦 {name}: {len(inst)} jobs, m*={m_star}")
        for config in configs:
            result = execute(config, inst, m_star=m_star)
            status = "✅" if result.feasible else "❌"
            print(f"  {status} {config.label:<28} machines={result.machines_used:<5} events={result.events}")


def demo_certificate():
    """Extract and check a lower-bound certificate from an SJF failure"""
    print("\n📜 SJF failure certificate")
    print("=" * 40)

    for seed in range(20):
        engineered = engineered_sjf_failure(seed)
        if engineered is None:
            continue
        inst, run = engineered
        pair = extract_sjf_certificate(run, inst)
        report = check_weakly_critical(pair, inst)
        print(f"Burst seed {seed}: SJF failed on {run.machines_used} machine(s) at t={format_rational(run.failure.time)}")
        print(f"  |G|={len(pair.jobs)}, |T|={format_rational(pair.measure)}, mu={pair.mu}")
        print(f"  beta={format_rational(pair.beta)}, alpha={format_rational(pair.alpha)}")
        print(f"  weakly critical: {'yes ✅' if report.ok else 'no ❌ ' + report.condition}")
        print(f"  implied lower bound on m*: {implied_lower_bound(pair.mu, pair.beta, pair.alpha):.6g}")
        print(f"  oracle m*: {oracle_m_star(inst)}")
        return
    print("⚠️  SJF coped with every burst tried")


def main():
    """Run every demo"""
    print("🚀 Machine Minimization Demo")
    print("=" * 50)
    demo_algorithms()
    demo_certificate()
    print("\n🎉 Demo complete!")


if __name__ == "__main__":
    main()
