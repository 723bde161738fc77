from core.cli import cli



def main():
    cli(prog_name="po-lab")


if __name__ == "__main__":
    main()
