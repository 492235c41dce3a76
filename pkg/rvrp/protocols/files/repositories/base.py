from typing import Protocol, TypeVar

ModelType = TypeVar("ModelType")


class RepositoryBase(Protocol[ModelType]):
    def load(self, *, path: str) -> ModelType:
        ...

    def save(self, obj: ModelType, *, path: str) -> None:
        ...
