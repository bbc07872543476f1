from catt.cli import app


def main() -> None:
    app(prog_name="catt")


if __name__ == "__main__":
    main()
