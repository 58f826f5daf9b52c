from hyperlam.cli import cli


def main():
    cli(prog_name="hyperlam")


if __name__ == "__main__":
    main()
