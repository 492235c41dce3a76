class NoRepositoryRegistered(Exception):
    """
    Exception when a service is used before its repository is registered
    """

    def __init__(self, service: str) -> None:
        super().__init__(f"no repository registered on {service}")
        self.service = service
