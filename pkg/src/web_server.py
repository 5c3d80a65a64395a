"""Flask JSON API over the polytope service."""

import sys
from pathlib import Path

# Add project root to Python path to allow absolute imports
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

import logging
import socket
from flask import Flask, jsonify, request
from src.config import validate_config, SERVER_PORT, LOG_LEVEL
from src.errors import (
    ConfigurationError,
    DomainError,
    FingerprintMismatch,
    FrameMismatchError,
    HypothesisRefusal,
)
from src.models import RunConfig
from src.polytope_service import PolytopeService
from src.serialization import point_from_dict, polytope_from_dict
from src.setup_builder import build_setup

logging.basicConfig(level=LOG_LEVEL)
logger = logging.getLogger(__name__)

# Validate configuration on import
try:
    validate_config()
except ValueError as e:
    print(f"Configuration error: {e}")

app = Flask(__name__)

service = PolytopeService.default()


def _error(e: Exception):
    """Map an exception to a JSON error response."""
    if isinstance(e, HypothesisRefusal):
        return jsonify({'error': 'HYPOTHESIS_REFUSED', 'message': str(e)}), 422
    if isinstance(e, FingerprintMismatch):
        return jsonify({'error': 'FINGERPRINT_MISMATCH', 'message': str(e)}), 409
    if isinstance(e, (ConfigurationError, DomainError, FrameMismatchError, ValueError)):
        return jsonify({'error': 'INVALID_INPUT', 'message': str(e)}), 400
    logger.error(f"Unexpected error on {request.path}: {e}")
    return jsonify({'error': str(e)}), 500


def _body() -> dict:
    data = request.get_json(silent=True)
    if not isinstance(data, dict):
        raise ConfigurationError("request body must be a JSON object")
    return data


def _setup_from(data: dict):
    if 'config' not in data or not isinstance(data['config'], dict):
        raise ConfigurationError("'config' is required, e.g. {\"group\": {\"kind\": \"su(2)\", \"copies\": 2}}")
    return build_setup(RunConfig.from_mapping(data['config']))


@app.route('/api/status')
def get_status():
    """Get service status information."""
    try:
        status = service.get_status()
        status['status'] = 'active'
        return jsonify(status)
    except Exception as e:
        logger.error(f"Error getting status: {e}")
        return jsonify({'error': str(e), 'status': 'error'}), 500


@app.route('/api/admissible', methods=['POST'])
def post_admissible():
    """List admissible elements, or test one gamma when the body carries it."""
    try:
        data = _body()
        setup = _setup_from(data)
        if 'gamma' in data:
            return jsonify(service.check_admissible(setup, data['gamma']))
        elements = service.admissible(setup)
        return jsonify({'fingerprint': setup.fingerprint, 'admissible': elements, 'total': len(elements)})
    except Exception as e:
        return _error(e)


@app.route('/api/generate', methods=['POST'])
def post_generate():
    """Generate the polytope of a setup."""
    try:
        data = _body()
        setup = _setup_from(data)
        mode = data.get('mode', 'ressayre')
        polytope, _, cached = service.generate(
            setup, mode=mode, prune_lp=bool(data.get('prune_lp', False)),
            use_cache=bool(data.get('use_cache', True)),
        )
        return jsonify({'polytope': polytope.to_dict(), 'cached': cached})
    except Exception as e:
        return _error(e)


@app.route('/api/check', methods=['POST'])
def post_check():
    """Membership of a point in a polytope."""
    try:
        data = _body()
        if 'polytope' not in data or 'point' not in data:
            raise ConfigurationError("'polytope' and 'point' are required")
        polytope = polytope_from_dict(data['polytope'])
        result = service.check(polytope, point_from_dict(data['point']))
        return jsonify(result.to_dict())
    except Exception as e:
        return _error(e)


@app.route('/api/verify', methods=['POST'])
def post_verify():
    """Monte Carlo validation of a polytope against its setup."""
    try:
        data = _body()
        setup = _setup_from(data)
        if 'polytope' not in data:
            raise ConfigurationError("'polytope' is required")
        polytope = polytope_from_dict(data['polytope'])
        samples = int(data.get('samples', 100))
        if samples < 0 or samples > 100000:
            raise ConfigurationError("samples must be between 0 and 100000")
        report = service.verify(
            polytope, setup, samples, seed=int(data.get('seed', 0)),
            tightness_trials=int(data.get('tightness', 0)),
            limit_samples=int(data.get('limit_samples', 0)),
        )
        return jsonify(report)
    except Exception as e:
        return _error(e)


@app.route('/api/schubert', methods=['POST'])
def post_schubert():
    """Product of Schubert classes on F_gamma."""
    try:
        data = _body()
        if 'group' not in data or 'gamma' not in data:
            raise ConfigurationError("'group' and 'gamma' are required")
        result = service.schubert_query(
            data['group'], data['gamma'], data.get('classes', []), duality=bool(data.get('duality', False)),
        )
        return jsonify(result)
    except Exception as e:
        return _error(e)


@app.errorhandler(404)
def not_found(error):
    """Handle 404 errors gracefully."""
    return jsonify({'error': 'Not Found', 'path': request.path}), 404


def find_free_port(start_port: int, max_attempts: int = 10) -> int:
    """Find a free port starting from start_port."""
    for i in range(max_attempts):
        port = start_port + i
        sock = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
        try:
            sock.bind(('', port))
            sock.close()
            return port
        except OSError:
            sock.close()
            continue
    raise RuntimeError(f"Could not find a free port starting from {start_port}")


if __name__ == '__main__':
    port = find_free_port(SERVER_PORT)
    if port != SERVER_PORT:
        logger.info(f"Port {SERVER_PORT} is in use, using port {port} instead")

    logger.info(f"Starting Flask server on port {port}")
    app.run(host='127.0.0.1', port=port)
