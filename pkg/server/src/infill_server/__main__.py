"""Start the serving shim: load the model, then serve the wire protocol."""

import argparse
import logging
import sys

import uvicorn

from .app import DEFAULT_BEAM_SIZE, DEFAULT_TOP_K, DEFAULT_TOP_P, ServerConfig, create_app
from .model import load_model


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="infill-server",
        description="Serve a fine-tuned seq2seq infilling model behind the maskfill protocol.",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    parser.add_argument("--model", default="t5-small", help="model path or hub id")
    parser.add_argument("--stub", action="store_true",
                        help="serve the deterministic rule-based stub (no weights needed)")
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=8777)
    parser.add_argument("--max-concurrent", type=int, default=8,
                        help="maximum in-flight requests")
    parser.add_argument("--top-k", type=int, default=DEFAULT_TOP_K)
    parser.add_argument("--top-p", type=float, default=DEFAULT_TOP_P)
    parser.add_argument("--beam-size", type=int, default=DEFAULT_BEAM_SIZE)
    args = parser.parse_args(argv)

    logging.basicConfig(stream=sys.stderr, level=logging.INFO,
                        format="%(levelname)s %(name)s: %(message)s")
    cfg = ServerConfig(
        model=args.model,
        stub=args.stub,
        host=args.host,
        port=args.port,
        max_concurrent=args.max_concurrent,
        top_k=args.top_k,
        top_p=args.top_p,
        beam_size=args.beam_size,
    )
    try:
        model = load_model(cfg.model, cfg.stub)
    except Exception as exc:
        logging.getLogger("infill_server").error("model failed to load: %s", exc)
        return 1
    app = create_app(cfg, model=model)
    uvicorn.run(app, host=cfg.host, port=cfg.port, log_level="warning")
    return 0


if __name__ == "__main__":
    sys.exit(main())
