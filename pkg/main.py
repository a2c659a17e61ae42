from __future__ import annotations

from src.catdl.main_app import app


def catdl() -> None:
    app()


if __name__ == "__main__":
    catdl()
