import json
import logging
import os
from datetime import datetime
from typing import Any, Callable, Dict, List, Optional

import numpy as np

from core.config import settings
from core.errors import BudgetExceededError
from core.model import Constraint, FiniteDomain, FiniteFunction, Relation
from core.parallel import parallel_map
from tools.clones import LabelSet, clone_tool
from tools.galois import ConstraintSet, SatisfiedConstraints, galois_tool
from tools.minors import MinorScheme, minor_tool
from tools.oracle import oracle_tool
from tools.partials import injective_partial_functions, partials_tool
from tools.sampling import (
    random_constraint,
    random_domain,
    random_function,
    random_relation,
    random_scheme,
    random_subset,
    random_superposition_instance,
    random_superset,
)
from tools.satisfaction import satisfaction_tool
from tools.substitution import FunctionClass, all_functions, substitution_tool

logger = logging.getLogger(__name__)

BOOLEAN = FiniteDomain(name="Bool", size=2)


def boolean_function(name: str) -> FiniteFunction:
    fns = {
        "AND": (2, lambda x, y: x & y),
        "OR": (2, lambda x, y: x | y),
        "NAND": (2, lambda x, y: 1 - (x & y)),
        "ID": (1, lambda x: x),
        "NEG": (1, lambda x: 1 - x),
    }
    arity, fn = fns[name]
    return FiniteFunction.from_callable(fn, arity, BOOLEAN)


def boolean_class(*members: FiniteFunction, arity_bound: int = 2) -> FunctionClass:
    return FunctionClass(input_domain=BOOLEAN, output_domain=BOOLEAN, members=members, arity_bound=arity_bound)


def binary_projections() -> List[FiniteFunction]:
    return [FiniteFunction.projection(BOOLEAN, 2, 0), FiniteFunction.projection(BOOLEAN, 2, 1)]


class SweepOrchestrator:
    def run_step(self, name: str, step: Callable[[], Dict[str, Any]]) -> Dict[str, Any]:
        logger.info(f"Starting sweep: {name}")
        start_time = datetime.now()
        try:
            report = step()
        except Exception as e:
            logger.error(f"Error in sweep {name}: {str(e)}")
            return {
                "sweep": name,
                "error": str(e),
                "error_type": type(e).__name__,
                "budget_exceeded": isinstance(e, BudgetExceededError),
                "status": "failed",
                "timestamp": datetime.now().isoformat(),
            }
        finally:
            logger.info(f"Sweep {name} completed in {(datetime.now() - start_time).total_seconds():.2f} seconds")

        report["sweep"] = name
        report.setdefault("status", "success" if not report.get("violations") else "violations")
        report["elapsed_seconds"] = (datetime.now() - start_time).total_seconds()
        report["timestamp"] = datetime.now().isoformat()
        return report

    def _trials(self, fn: Callable[[np.random.Generator, int], List[Dict[str, Any]]], trials: int, seed: int,
                jobs: Optional[int]) -> List[Dict[str, Any]]:
        found = parallel_map(lambda trial: fn(np.random.default_rng([seed, trial]), trial), list(range(trials)), jobs)
        return [violation for batch in found for violation in batch]

    def preservation_trial(self, rng: np.random.Generator, trial: int) -> List[Dict[str, Any]]:
        A = random_domain(rng, 3, "A")
        B = random_domain(rng, 3, "B")
        n = int(rng.integers(1, 3))
        f = random_function(rng, A, B, n)
        family = int(rng.integers(1, 4))
        arities = [int(rng.integers(1, 4)) for _ in range(family)]

        violations = []
        cs = []
        for arity in arities:
            R = random_relation(rng, A, arity, float(rng.uniform(0.2, 0.7)))
            image = satisfaction_tool.image_of_relation(f, R)
            if image != oracle_tool.image(f, R):
                violations.append({"trial": trial, "kind": "oracle_image"})
            cs.append(Constraint(antecedent=R, consequent=random_superset(rng, image, 0.3)))

        H = random_scheme(rng, int(rng.integers(1, 4)), arities, 2)
        tight = minor_tool.tight_minor_constraint(H, cs)
        if not satisfaction_tool.satisfies(f, tight):
            violations.append({"trial": trial, "kind": "tight", "scheme": H.payload()})
        relaxed = minor_tool.relax(tight, random_subset(rng, tight.antecedent), random_superset(rng, tight.consequent))
        if not satisfaction_tool.satisfies(f, relaxed):
            violations.append({"trial": trial, "kind": "relaxed", "scheme": H.payload()})
        return violations

    def preservation_sweep(self, trials: int = 1000, seed: Optional[int] = None, jobs: Optional[int] = None) -> Dict[str, Any]:
        seed = settings.seed if seed is None else seed
        violations = self._trials(self.preservation_trial, trials, seed, jobs)
        return {"trials": trials, "seed": seed, "violations": violations}

    def composition_trial(self, rng: np.random.Generator, trial: int) -> List[Dict[str, Any]]:
        domain = random_domain(rng, 3)
        target = int(rng.integers(1, 4))
        middle = [int(rng.integers(1, 4)) for _ in range(int(rng.integers(1, 4)))]
        H = random_scheme(rng, target, middle, 2)

        inner: List[MinorScheme] = []
        leaves: List[List[Relation]] = []
        for n in middle:
            arities = [int(rng.integers(1, 4)) for _ in range(int(rng.integers(1, 3)))]
            inner.append(random_scheme(rng, n, arities, 2))
            leaves.append([random_relation(rng, domain, a, float(rng.uniform(0.3, 0.9))) for a in arities])

        composed = minor_tool.compose_schemes(H, inner)
        flat = [R for group in leaves for R in group]
        direct = minor_tool.tight_minor_relations(composed, flat)
        nested = minor_tool.tight_minor_relations(
            H, [minor_tool.tight_minor_relations(scheme, group) for scheme, group in zip(inner, leaves)]
        )

        violations = []
        if direct != nested:
            violations.append({"trial": trial, "kind": "composition", "scheme": composed.payload()})
        if direct != oracle_tool.tight_minor(composed, flat):
            violations.append({"trial": trial, "kind": "oracle_minor", "scheme": composed.payload()})
        return violations

    def composition_sweep(self, trials: int = 500, seed: Optional[int] = None, jobs: Optional[int] = None) -> Dict[str, Any]:
        seed = settings.seed if seed is None else seed
        violations = self._trials(self.composition_trial, trials, seed, jobs)
        return {"trials": trials, "seed": seed, "violations": violations}

    def roundtrip_sweep(self, jobs: Optional[int] = None) -> Dict[str, Any]:
        classes = {
            "AND": boolean_class(boolean_function("AND")),
            "projections": boolean_class(*binary_projections()),
            "NAND": boolean_class(boolean_function("NAND")),
        }
        results = {}
        violations = []
        for name, generators in classes.items():
            K = substitution_tool.svs_closure(generators, 2, jobs)
            logger.info(f"Step: round trip for the closure of {name} ({K.cardinality} functions)")
            report = galois_tool.galois_roundtrip_report(K, 2, jobs)
            results[name] = {
                "class_size": K.cardinality,
                "non_members": report["non_members"],
                "separated": report["separated"],
                "witnesses": [entry["constraint"] for entry in report["entries"] if "constraint" in entry],
            }
            violations.extend(
                {"class": name, "function": entry["function"], "status": entry["status"]}
                for entry in report["entries"]
                if entry["status"] != "separated"
            )
        return {"classes": results, "violations": violations}

    def _definability_checks(self, name: str, K: FunctionClass, T: ConstraintSet, minor_trials: int, samples: int,
                             seed: int, jobs: Optional[int]) -> List[Dict[str, Any]]:
        rng = np.random.default_rng([seed, len(name)])
        violations = []

        for arity in (1, 2):
            canonical = minor_tool.canonical_constraints(K.input_domain, K.output_domain, arity)
            for kind, c in canonical._asdict().items():
                if c not in T:
                    violations.append({"class": name, "kind": f"missing_{kind}", "arity": arity})

        by_arity = {arity: T.of_arity(arity) for arity in (1, 2)}
        for _ in range(minor_trials):
            arity = int(rng.integers(1, 3))
            c = by_arity[arity][int(rng.integers(0, len(by_arity[arity])))]
            relaxed = minor_tool.relax(c, random_subset(rng, c.antecedent), random_superset(rng, c.consequent))
            if relaxed not in T:
                violations.append({"class": name, "kind": "relaxation", "constraint": relaxed.payload()})

            same = [d for d in by_arity[arity] if d.antecedent == c.antecedent]
            d = same[int(rng.integers(0, len(same)))]
            intersected = minor_tool.intersect_consequents([c, d])
            if intersected not in T:
                violations.append({"class": name, "kind": "intersection", "constraint": intersected.payload()})

            arities = [int(rng.integers(1, 3)) for _ in range(int(rng.integers(1, 3)))]
            family = [by_arity[a][int(rng.integers(0, len(by_arity[a])))] for a in arities]
            H = random_scheme(rng, int(rng.integers(1, 3)), arities, 2)
            tight = minor_tool.tight_minor_constraint(H, family, jobs)
            conjunctive = minor_tool.relax(
                tight, random_subset(rng, tight.antecedent), random_superset(rng, tight.consequent)
            )
            if tight not in T or conjunctive not in T:
                violations.append({"class": name, "kind": "conjunctive_minor", "scheme": H.payload()})

        satisfied = SatisfiedConstraints.from_class(K, T.arity_bound)
        for _ in range(samples):
            c = satisfied.sample_outsider(rng, int(rng.integers(1, 3)))
            if c is None:
                continue
            if c in T:
                violations.append({"class": name, "kind": "outsider_in_set", "constraint": c.payload()})
                continue
            g = galois_tool.separating_function(T, c, jobs)
            if g is None or satisfaction_tool.satisfies(g, c):
                violations.append({"class": name, "kind": "separating_function", "constraint": c.payload()})
        return violations

    def definability_sweep(self, minor_trials: int = 200, samples: int = 20, seed: Optional[int] = None,
                           jobs: Optional[int] = None) -> Dict[str, Any]:
        seed = settings.seed if seed is None else seed
        classes = {
            "id": boolean_class(boolean_function("ID"), arity_bound=1),
            "id_neg": boolean_class(boolean_function("ID"), boolean_function("NEG"), arity_bound=1),
            "AND_projections": boolean_class(boolean_function("AND"), *binary_projections()),
        }
        results = {}
        violations = []
        for name, K in classes.items():
            logger.info(f"Step: constraints satisfied by {name}")
            T = galois_tool.constraints_satisfied_by(K, 2)
            results[name] = {"constraints": T.cardinality}
            violations.extend(self._definability_checks(name, K, T, minor_trials, samples, seed, jobs))
        return {"classes": results, "seed": seed, "violations": violations}

    def superposition_trial(self, rng: np.random.Generator, trial: int) -> List[Dict[str, Any]]:
        domain = random_domain(rng, 3)
        instance = random_superposition_instance(rng, domain, 4, 3, 3)
        labels = LabelSet(labels=instance.labels)
        decomposition = clone_tool.superposition_decomposition(instance.b, instance.bs, labels, instance.relations)

        violations = []
        if not decomposition.agrees:
            violations.append({"trial": trial, "kind": "decomposition", "scheme": decomposition.scheme.payload()})
        naive = oracle_tool.superposition(instance.relations, instance.b, instance.bs, labels)
        if naive != decomposition.superposition:
            violations.append({"trial": trial, "kind": "oracle_superposition"})
        return violations

    def superposition_sweep(self, trials: int = 500, seed: Optional[int] = None, jobs: Optional[int] = None) -> Dict[str, Any]:
        seed = settings.seed if seed is None else seed
        violations = self._trials(self.superposition_trial, trials, seed, jobs)
        return {"trials": trials, "seed": seed, "violations": violations}

    def local_closure_trial(self, rng: np.random.Generator, trial: int) -> List[Dict[str, Any]]:
        A = FiniteDomain(name="A", size=2)
        B = FiniteDomain(name="B", size=2)
        pool = [
            FiniteFunction.from_array(table, arity, A, B)
            for arity in (1, 2)
            for table in all_functions(A, B, arity)
        ]
        K = FunctionClass(
            input_domain=A, output_domain=B, members=[f for f in pool if rng.random() < 0.3], arity_bound=2,
        )
        T = ConstraintSet(
            input_domain=A,
            output_domain=B,
            members=[random_constraint(rng, A, B, int(rng.integers(1, 3))) for _ in range(int(rng.integers(0, 8)))],
            arity_bound=2,
        )

        violations = []
        if substitution_tool.local_closure_functions(K) != K:
            violations.append({"trial": trial, "kind": "functions"})
        if galois_tool.local_closure_constraints(T) != T:
            violations.append({"trial": trial, "kind": "constraints"})
        return violations

    def local_closure_sweep(self, trials: int = 50, seed: Optional[int] = None, jobs: Optional[int] = None) -> Dict[str, Any]:
        seed = settings.seed if seed is None else seed
        violations = self._trials(self.local_closure_trial, trials, seed, jobs)
        return {"trials": trials, "seed": seed, "violations": violations}

    def extensible_family_sweep(self, trials: int = 200, seed: Optional[int] = None, jobs: Optional[int] = None) -> Dict[str, Any]:
        seed = settings.seed if seed is None else seed
        three = FiniteDomain(name="A", size=3)
        families = {
            "injective_unary_3_to_3": (injective_partial_functions(three, three, [1]), 2),
            "injective_unary_binary_2_to_4": (
                injective_partial_functions(FiniteDomain(name="A", size=2), FiniteDomain(name="B", size=4), [1, 2]),
                2,
            ),
        }
        results = {}
        violations = []
        for name, (F, bound) in families.items():
            logger.info(f"Step: closure harness on {name} ({F.cardinality} partial functions)")
            report = partials_tool.proposition1_harness(F, trials, bound, seed, jobs)
            results[name] = {"family_size": F.cardinality, "violations": len(report["violations"])}
            violations.extend({"family": name, **violation} for violation in report["violations"])

        pigeonhole = partials_tool.is_extensible_family(injective_partial_functions(three, three, [1, 2]))
        results["injective_unary_binary_3_to_3"] = pigeonhole.payload()
        return {"families": results, "seed": seed, "violations": violations}

    def counts(self) -> Dict[str, Any]:
        leq = Relation.of(BOOLEAN, [(0, 0), (0, 1), (1, 1)])
        return {
            "pol_leq_2": clone_tool.pol(BOOLEAN, [leq], 2).cardinality,
            "inv_neg_2": len(clone_tool.inv(boolean_class(boolean_function("NEG"), arity_bound=1), 2)),
            "clone_nand_2": clone_tool.clone_generate(boolean_class(boolean_function("NAND")), 2).cardinality,
        }

    def run_all(self, seed: Optional[int] = None, jobs: Optional[int] = None) -> Dict[str, Any]:
        seed = settings.seed if seed is None else seed
        steps = {
            "preservation": lambda: self.preservation_sweep(seed=seed, jobs=jobs),
            "composition": lambda: self.composition_sweep(seed=seed, jobs=jobs),
            "roundtrip": lambda: self.roundtrip_sweep(jobs=jobs),
            "definability": lambda: self.definability_sweep(seed=seed, jobs=jobs),
            "superposition": lambda: self.superposition_sweep(seed=seed, jobs=jobs),
            "counts": self.counts,
            "local_closure": lambda: self.local_closure_sweep(seed=seed, jobs=jobs),
            "extensible": lambda: self.extensible_family_sweep(seed=seed, jobs=jobs),
        }
        reports = {}
        for i, (name, step) in enumerate(steps.items(), start=1):
            logger.info(f"Step {i}: {name}")
            reports[name] = self.run_step(name, step)

        failed = [name for name, report in reports.items() if report["status"] != "success"]
        return {
            "seed": seed,
            "sweeps": reports,
            "status": "success" if not failed else "violations",
            "failed_sweeps": failed,
            "budget_exceeded": any(report.get("budget_exceeded", False) for report in reports.values()),
            "timestamp": datetime.now().isoformat(),
        }

    def save_results(self, results: Dict[str, Any], filename: Optional[str] = None) -> str:
        if not filename:
            timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")
            filename = os.path.join(settings.results_dir, f"relgalois_sweep_{results.get('sweep', 'all')}_{timestamp}.json")

        try:
            with open(filename, 'w') as f:
                json.dump(results, f, indent=2, sort_keys=True, default=str)

            logger.info(f"Sweep results saved to {filename}")
            return filename

        except Exception as e:
            logger.error(f"Error saving results: {str(e)}")
            raise


orchestrator = SweepOrchestrator()
