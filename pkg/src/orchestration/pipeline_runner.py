import logging
from datetime import datetime
from typing import Any, Callable, Dict, List, Optional, Tuple

from src.certify.certificate import Certificate
from src.certify.section4 import verify_section4
from src.certify.ten_dim import certify_tenDim
from src.config.settings import settings
from src.models.documents import CertificateDocument
from src.orchestration import pipelines
from src.storage.artifact_store import ArtifactStore

logger = logging.getLogger(__name__)

# The acceptance suite, in run order
SUITE: List[Tuple[str, Callable[[], Certificate]]] = [
    ('check-ainfty-lambda1', lambda: pipelines.check_ainfty('lambda1', 8)),
    ('check-ainfty-dual_numbers', lambda: pipelines.check_ainfty('dual_numbers', 8)),
    ('check-ainfty-y_cube', lambda: pipelines.check_ainfty('y_cube', 8)),
    ('check-ainfty-truncated_poly', lambda: pipelines.check_ainfty('truncated_poly(6)', 8)),
    ('check-ainfty-tensor', lambda: pipelines.check_ainfty('tensor(lambda1,dual_numbers)', 8)),
    ('check-ainfty-free_C', lambda: pipelines.check_ainfty('free_C(6)', 8)),
    ('hochschild-lambda1', lambda: pipelines.hochschild('lambda1', 6)),
    ('hochschild-dual_numbers', lambda: pipelines.hochschild('dual_numbers', 6)),
    ('hochschild-tensor', lambda: pipelines.hochschild('tensor(lambda1,dual_numbers)', 4)),
    ('hochschild-truncated_poly', lambda: pipelines.hochschild('truncated_poly(6)', 6)),
    ('ext', lambda: pipelines.ext()),
    ('solve-morphism', lambda: pipelines.solve_morphism()),
    ('certify-10dim', lambda: certify_tenDim()[0]),
    ('verify-section4', lambda: verify_section4()),
]


def to_document(certificate: Certificate) -> CertificateDocument:
    return CertificateDocument.model_validate(certificate.to_dict())


class PipelineRunner:
    def __init__(self, workdir: Optional[str] = None):
        self.store = ArtifactStore(workdir)

        # Pipeline statistics
        self.pipeline_stats = {
            'start_time': None,
            'end_time': None,
            'pipelines_run': 0,
            'checks_run': 0,
            'checks_failed': 0,
            'files_written': [],
            'steps': {},
        }

    def run_pipeline(self, name: str, build: Callable[[], Certificate]) -> CertificateDocument:
        """Run one pipeline, store its certificate, record step statistics"""
        started = datetime.now()
        logger.info(f"Starting pipeline {name}")
        try:
            certificate = build()
            document = to_document(certificate)
            path = self.store.save_document(document, name)
        except Exception as e:
            logger.error(f"Error in pipeline {name}: {str(e)}")
            self.pipeline_stats['steps'][name] = {'error': str(e)}
            raise
        failed = certificate.failed()
        self.pipeline_stats['pipelines_run'] += 1
        self.pipeline_stats['checks_run'] += len(certificate.checks)
        self.pipeline_stats['checks_failed'] += len(failed)
        self.pipeline_stats['files_written'].append(str(path))
        self.pipeline_stats['steps'][name] = {
            'verdict': document.verdict,
            'checks': len(certificate.checks),
            'failed': failed,
            'duration': (datetime.now() - started).total_seconds(),
        }
        logger.info(f"Pipeline {name}: {document.verdict}")
        return document

    def run_full_pipeline(self) -> Dict[str, Any]:
        """Run the whole suite and write an aggregate certificate"""
        try:
            logger.info("Starting verification suite")
            self.pipeline_stats['start_time'] = datetime.now()
            settings.validate_settings()

            documents = {name: self.run_pipeline(name, build) for name, build in SUITE}

            aggregate = Certificate('run-all', {'pipelines': [name for name, _ in SUITE]})
            for name, document in documents.items():
                aggregate.add(name, f"Pipeline {name} passes", document.verdict == 'PASS',
                              value=f"{sum(c.verdict == 'PASS' for c in document.checks)}/{len(document.checks)}")
            self.run_pipeline_document('run-all', aggregate)

            self.pipeline_stats['end_time'] = datetime.now()
            self.pipeline_stats['duration'] = (
                self.pipeline_stats['end_time'] - self.pipeline_stats['start_time']
            ).total_seconds()
            self.pipeline_stats['verdict'] = aggregate.verdict
            logger.info(f"Verification suite finished: {aggregate.verdict}")
            return self._get_pipeline_summary()

        except Exception as e:
            logger.error(f"Pipeline failed: {str(e)}")
            self.pipeline_stats['end_time'] = datetime.now()
            self.pipeline_stats['error'] = str(e)
            raise

    def run_pipeline_document(self, name: str, certificate: Certificate) -> CertificateDocument:
        return self.run_pipeline(name, lambda: certificate)

    def _get_pipeline_summary(self) -> Dict[str, Any]:
        """Run statistics; timestamps stay out of the certificates"""
        return {
            'pipeline_stats': self.pipeline_stats,
            'bounds': settings.bounds(),
        }


if __name__ == "__main__":
    logging.basicConfig(level=getattr(logging, settings.AINFTY_LOG_LEVEL.upper(), logging.INFO))
    runner = PipelineRunner()
    summary = runner.run_full_pipeline()
    print("Verification suite summary:")
    print(summary)
