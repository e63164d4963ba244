"""Run the scorer service: ``python -m model_server --config server.yaml``."""

import argparse

import uvicorn

from .app import create_app_from_config
from .config import load_config


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="model_server",
                                     description="transformer pair-scoring service")
    parser.add_argument("--config", required=True, help="YAML server configuration")
    args = parser.parse_args(argv)
    config = load_config(args.config)
    app = create_app_from_config(config)
    uvicorn.run(app, host=config.host, port=config.port, log_level="info")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
